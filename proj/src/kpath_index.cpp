#include "udg/kpath_index.hpp"

#include <algorithm>
#include <stdexcept>

#include "udg/error.hpp"

namespace udg {

using solvers::PathMode;

KPathIndex::KPathIndex(const GridIndex& grid, int k, PathMode mode)
    : grid_(&grid), k_(k), mode_(mode) {
  if ((mode == PathMode::path && k < 2) || (mode == PathMode::cycle && k < 3))
    throw Error(ErrorCode::bad_parameter,
                "KPathIndex: PATH needs k >= 2, CYCLE needs k >= 3");
  f_k_ = static_cast<long long>(k) * (4LL * k + 1) * (4LL * k + 1);
  bootstrap();
}

void KPathIndex::bootstrap() {
  SolveMemo memo;
  for (const auto& [c, members] : grid_->cells()) {
    CellEntry e;
    e.cluster = static_cast<long long>(grid_->cell_stats(c, 2 * k_).second);
    entries_.emplace(c, std::move(e));
  }
  for (auto& [c, e] : entries_) recompute_flag(c, e, memo);
}

void KPathIndex::apply_insert(VertexId, Point, CellId c) { apply(true, c); }

void KPathIndex::apply_delete(VertexId, Point, CellId c) { apply(false, c); }

void KPathIndex::apply(bool insert, CellId c) {
  if (!insert && grid_->cell_count(c) == 0) dissociate(c);
  SolveMemo memo;
  for (CellId b : neighbor_cells(c, 2 * k_)) {
    auto it = entries_.find(b);
    if (it != entries_.end()) {
      it->second.cluster += insert ? 1 : -1;
      continue;
    }
    if (b == c && insert && grid_->cell_count(c) > 0) {
      CellEntry e;
      e.cluster = static_cast<long long>(grid_->cell_stats(c, 2 * k_).second);
      entries_.emplace(c, std::move(e));
    }
  }
  for (CellId b : neighbor_cells(c, 2 * k_)) {
    auto it = entries_.find(b);
    if (it != entries_.end()) recompute_flag(b, it->second, memo);
  }
}

void KPathIndex::recompute_flag(CellId c, CellEntry& e, SolveMemo& memo) {
  if (e.cluster < k_) {
    set_flag(c, e, false, {});
    return;
  }
  // Same-cell clique rule: the lexicographically smallest cluster cell with
  // >= k residents yields a witness of its k smallest ids.
  for (CellId b : neighbor_cells(c, 2 * k_)) {
    auto members = grid_->residents(b);
    if (static_cast<int>(members.size()) >= k_) {
      std::vector<VertexId> ids(members.begin(), members.end());
      std::sort(ids.begin(), ids.end());
      ids.resize(k_);
      set_flag(c, e, true, std::move(ids));
      return;
    }
  }
  if (e.cluster >= f_k_)
    throw std::logic_error(
        "KPathIndex: cluster at threshold but no heavy cell (pigeonhole)");

  std::vector<VertexId> cluster;
  cluster.reserve(e.cluster);
  for (CellId b : neighbor_cells(c, 2 * k_)) {
    auto members = grid_->residents(b);
    cluster.insert(cluster.end(), members.begin(), members.end());
  }
  std::sort(cluster.begin(), cluster.end());

  auto mit = memo.find(cluster);
  if (mit == memo.end()) {
    auto g = grid_->induced_udg(cluster);
    mit = memo.emplace(cluster, solvers::solve_kpath(g, k_, mode_)).first;
  }
  if (mit->second)
    set_flag(c, e, true, *mit->second);
  else
    set_flag(c, e, false, {});
}

void KPathIndex::set_flag(CellId c, CellEntry& e, bool yes,
                          std::vector<VertexId> wit) {
  if (yes && !e.yes) {
    ilist_.push_back(c);
    e.pos = std::prev(ilist_.end());
  } else if (!yes && e.yes) {
    ilist_.erase(*e.pos);
    e.pos.reset();
  }
  e.yes = yes;
  e.witness = std::move(wit);
}

void KPathIndex::dissociate(CellId c) {
  auto it = entries_.find(c);
  if (it == entries_.end()) return;
  if (it->second.yes) ilist_.erase(*it->second.pos);
  entries_.erase(it);
}

bool KPathIndex::query_decision() const { return !ilist_.empty(); }

std::optional<std::vector<VertexId>> KPathIndex::query_witness() const {
  if (ilist_.empty()) return std::nullopt;
  ++query_accesses_;
  return entries_.at(ilist_.front()).witness;
}

std::unordered_map<CellId, bool> KPathIndex::flags() const {
  std::unordered_map<CellId, bool> out;
  for (const auto& [c, e] : entries_) out.emplace(c, e.yes);
  return out;
}

long long KPathIndex::cluster_count(CellId c) const {
  auto it = entries_.find(c);
  return it == entries_.end() ? 0 : it->second.cluster;
}

void KPathIndex::check_invariants() const {
  if (entries_.size() != grid_->cells().size())
    throw std::logic_error("KPathIndex: entry set != nonempty cells");
  std::size_t yes_count = 0;
  for (const auto& [c, e] : entries_) {
    if (grid_->cell_count(c) == 0)
      throw std::logic_error("KPathIndex: entry for an empty cell");
    if (e.cluster !=
        static_cast<long long>(grid_->cell_stats(c, 2 * k_).second))
      throw std::logic_error("KPathIndex: stale cluster count");
    if (e.yes) {
      ++yes_count;
      if (static_cast<int>(e.witness.size()) != k_)
        throw std::logic_error("KPathIndex: witness length != k");
      for (std::size_t i = 0; i + 1 < e.witness.size(); ++i)
        if (!grid_->adjacent(e.witness[i], e.witness[i + 1]))
          throw std::logic_error("KPathIndex: witness breaks adjacency");
      if (mode_ == PathMode::cycle &&
          !grid_->adjacent(e.witness.back(), e.witness.front()))
        throw std::logic_error("KPathIndex: cycle witness not closed");
    } else if (e.pos) {
      throw std::logic_error("KPathIndex: no-cell with a list position");
    }
  }
  if (yes_count != ilist_.size())
    throw std::logic_error("KPathIndex: yes-list out of sync");
  for (CellId c : ilist_)
    if (!entries_.at(c).yes)
      throw std::logic_error("KPathIndex: list holds a no-cell");
}

}  // namespace udg
