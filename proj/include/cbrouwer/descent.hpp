#ifndef CBROUWER_DESCENT_HPP
#define CBROUWER_DESCENT_HPP

/**
 * Per-atom search for a nested sequence of subdivision cells shrinking onto
 * a fixed point.
 *
 * A cell at level k is kept only while the number of completely labeled cells
 * of some finer subdivision inside it is odd.  That parity is computed from
 * the cell's boundary: it equals the parity of the number of boundary facets,
 * subdivided to the same resolution, whose labels are exactly {1, …, N−1}.
 * Each child is chosen among those with odd parity; when no finer resolution
 * keeps a child odd the search backs up one level and looks deeper.
 *
 * Everything here runs on one atom with plain Euclidean vectors.  Atoms never
 * share state, which is what makes the conditional solve equal the pasting of
 * the one-atom solves bit for bit.
 */

#include <algorithm>
#include <cstdint>
#include <cstring>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <unordered_map>
#include <vector>

#include "labeling.hpp"

namespace cbrouwer {

struct SolverConfig {
  double tol_residual = 1e-6;
  double tol_diam = 1e-9;
  std::size_t max_rounds = 200;
  std::size_t cell_budget = kDefaultCellBudget;
  /// Extra subdivision levels examined when choosing a child; negative picks it from the cell budget.
  int lookahead = -1;

  void validate() const {
    if (!(tol_residual > 0.0)) throw Error(ErrorCode::InvalidConfig, "tol_residual must be > 0");
    if (!(tol_diam > 0.0)) throw Error(ErrorCode::InvalidConfig, "tol_diam must be > 0");
    if (max_rounds < 1) throw Error(ErrorCode::InvalidConfig, "max_rounds must be >= 1");
    if (cell_budget < 1) throw Error(ErrorCode::InvalidConfig, "cell_budget must be >= 1");
  }
};

enum class SolveStatus { Converged, DiameterTolerance, MaxRoundsExceeded, SearchExhausted };

inline std::string_view to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Converged: return "converged";
    case SolveStatus::DiameterTolerance: return "diameter_tolerance";
    case SolveStatus::MaxRoundsExceeded: return "max_rounds_exceeded";
    case SolveStatus::SearchExhausted: return "search_exhausted";
  }
  return "unknown";
}

namespace detail {

struct AtomProblem {
  std::vector<Vec> base;
  std::function<Vec(const Vec&)> image;        // must land in conv(base)
  std::function<double(const Vec&)> residual;  // stopping measure at a candidate
  std::function<Vec(const Vec&)> output;       // reported point for a candidate; identity when empty
};

struct RoundRecord {
  std::size_t round = 0;
  double diam = 0.0;
  double residual = 0.0;
  Vec point;
  std::vector<Vec> cell;  // the round's cell, in the subdivision's coordinates
};

struct AtomOutcome {
  Vec point;
  double residual = 0.0;
  SolveStatus status = SolveStatus::MaxRoundsExceeded;
  std::size_t rounds = 0;
  std::size_t backtracks = 0;
  std::size_t evaluations = 0;
  std::vector<RoundRecord> history;
  std::vector<Vec> certificate;         // certificate[j] carries label j + 1 when complete
  std::vector<int> certificate_labels;
  std::size_t certificate_depth = 0;
};

/// Hash table from the exact bits of a point to a small integer.
class PointTable {
 public:
  static std::uint64_t hash(const Vec& v) {
    std::uint64_t h = 0x9e3779b97f4a7c15ull;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      std::uint64_t w;
      std::memcpy(&w, v.data() + i, sizeof w);
      h ^= w + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
      h = (h ^ (h >> 31)) * 0xbf58476d1ce4e5b9ull;
    }
    return h;
  }

  const int* find(const Vec& v, std::uint64_t h) const {
    const auto it = heads_.find(h);
    if (it == heads_.end()) return nullptr;
    for (std::uint32_t e = it->second; e != kNone; e = entries_[e].next)
      if (std::memcmp(entries_[e].point.data(), v.data(), static_cast<std::size_t>(v.size()) * sizeof(double)) == 0)
        return &entries_[e].value;
    return nullptr;
  }

  void insert(const Vec& v, std::uint64_t h, int value) {
    const auto idx = static_cast<std::uint32_t>(entries_.size());
    auto [it, fresh] = heads_.emplace(h, idx);
    entries_.push_back(Entry{v, value, fresh ? kNone : it->second});
    if (!fresh) it->second = idx;
  }

  std::size_t size() const noexcept { return entries_.size(); }
  void clear() {
    heads_.clear();
    entries_.clear();
  }

 private:
  static constexpr std::uint32_t kNone = 0xffffffffu;
  struct Entry {
    Vec point;
    int value;
    std::uint32_t next;
  };
  std::unordered_map<std::uint64_t, std::uint32_t> heads_;
  std::vector<Entry> entries_;
};

/// Labels for one atom, memoized on the exact bits of the point.
class AtomLabeler {
 public:
  static constexpr std::size_t kCacheLimit = 2'000'000;

  AtomLabeler(const std::vector<Vec>& base, std::function<Vec(const Vec&)> image, std::size_t atom)
      : frame_(base), image_(std::move(image)), atom_(atom), lambda_(frame_.vertices()), mu_(frame_.vertices()) {}

  int operator()(const Vec& y) {
    const std::uint64_t h = PointTable::hash(y);
    if (const int* hit = cache_.find(y, h)) return *hit;
    if (cache_.size() >= kCacheLimit) cache_.clear();
    ++evaluations_;
    point_coords_into(frame_, y, atom_, lambda_);
    image_coords_into(frame_, image_(y), atom_, mu_);
    const int l = label_rule(lambda_, mu_);
    cache_.insert(y, h, l);
    return l;
  }

  std::size_t evaluations() const noexcept { return evaluations_; }

 private:
  AffineFrame frame_;
  std::function<Vec(const Vec&)> image_;
  std::size_t atom_;
  Vec lambda_, mu_;
  PointTable cache_;
  std::size_t evaluations_ = 0;
};

using Cell = std::vector<Vec>;

class ParityDescent {
 public:
  ParityDescent(const AtomProblem& problem, const SolverConfig& cfg, std::size_t atom, std::size_t step_budget)
      : problem_(problem), cfg_(cfg), atom_(atom), step_budget_(step_budget), n_(problem.base.size()),
        labeler_(problem.base, problem.image, atom), perms_(all_permutations(n_)) {
    if (n_ >= 2) facet_perms_ = all_permutations(n_ - 1);
    seen_.assign(n_, false);
    choose_lookahead();
  }

  AtomOutcome run() {
    AtomOutcome out;
    if (n_ == 1) return single_point();
    if (factorial(n_) > cfg_.cell_budget)
      throw Error(ErrorCode::BudgetExceeded, "one subdivision needs " + std::to_string(factorial(n_)) + " cells");
    path_.push_back(Node{problem_.base, 0, 0, 0, 1, {}, {}, 0});
    for (std::size_t round = 1; round <= cfg_.max_rounds; ++round) {
      if (!reach(round)) {
        out.status = SolveStatus::SearchExhausted;
        break;
      }
      const Cell& cell = path_.back().cell;
      const Vec y = barycenter_atom(cell);
      const double res = problem_.residual(y);
      const double dia = max_pairwise_distance(cell);
      out.point = problem_.output ? problem_.output(y) : y;
      out.residual = res;
      out.rounds = round;
      out.history.push_back(RoundRecord{round, dia, res, out.point, cell});
      if (res <= cfg_.tol_residual) {
        out.status = SolveStatus::Converged;
        break;
      }
      if (dia <= cfg_.tol_diam) {
        out.status = SolveStatus::DiameterTolerance;
        break;
      }
    }
    if (out.history.empty()) {
      const Vec y = barycenter_atom(problem_.base);
      out.point = problem_.output ? problem_.output(y) : y;
      out.residual = problem_.residual(y);
    }
    certify(out);
    out.backtracks = backtracks_;
    out.evaluations = labeler_.evaluations();
    return out;
  }

 /// Largest L with N·((N−1)!)^L ≤ min(4096, budget); 0 for intervals.
  static std::size_t auto_lookahead(std::size_t n, std::size_t budget) {
    if (n <= 2) return 0;
    const std::size_t f = factorial(n - 1);
    const std::size_t cap = std::min<std::size_t>(4096, budget);
    std::size_t cost = n, l = 0;
    while (cost * f <= cap) {
      cost *= f;
      ++l;
    }
    return l;
  }

 private:
  struct Node {
    Cell cell;
    std::size_t level;
    std::size_t chosen_at;  // absolute resolution at which this cell had odd parity
    std::size_t boost;
    std::size_t min_res;    // lowest resolution still worth scanning
    std::vector<Cell> candidates;
    std::vector<std::size_t> candidate_res;
    std::size_t next;
  };

  /// Backtracking may look up to 16x deeper than the lookahead, at most 4 extra levels.
  void choose_lookahead() {
    if (n_ <= 2) return;  // parity of an interval does not depend on resolution
    const std::size_t f = factorial(n_ - 1);
    lookahead_ = cfg_.lookahead >= 0 ? static_cast<std::size_t>(cfg_.lookahead) : auto_lookahead(n_, cfg_.cell_budget);
    std::size_t cost = n_;
    for (std::size_t i = 0; i < lookahead_ && cost <= 65536; ++i) cost *= f;
    while (max_boost_ < 4 && cost * f <= 65536) {
      cost *= f;
      ++max_boost_;
    }
  }

  AtomOutcome single_point() {
    AtomOutcome out;
    const Vec& y = problem_.base.front();
    out.point = problem_.output ? problem_.output(y) : y;
    out.residual = problem_.residual(y);
    out.rounds = 1;
    out.status = out.residual <= cfg_.tol_residual ? SolveStatus::Converged : SolveStatus::MaxRoundsExceeded;
    out.history.push_back(RoundRecord{1, 0.0, out.residual, out.point, problem_.base});
    out.certificate = {y};
    out.certificate_labels = {1};
    return out;
  }

  /// Parity of the number of sub-facets of `facet`, r levels down, labeled exactly {1, …, N−1}.
  bool facet_doors(const Cell& facet, std::size_t r) {
    if (r == 0) {
      std::vector<bool>& seen = seen_;
      std::fill(seen.begin(), seen.end(), false);
      for (const Vec& v : facet) {
        const int l = labeler_(v);
        if (static_cast<std::size_t>(l) >= n_ || seen[static_cast<std::size_t>(l)]) return false;
        seen[static_cast<std::size_t>(l)] = true;
      }
      return true;
    }
    if (scratch_.size() <= r) grow_scratch(r, facet.front().size());
    Cell& sub = scratch_[r];
    std::vector<const Vec*>& chosen = chosen_[r];
    bool parity = false;
    for (const Permutation& p : facet_perms_) {
      for (std::size_t k = 0; k < p.size(); ++k) {
        chosen.assign(k + 1, nullptr);
        for (std::size_t i = 0; i <= k; ++i) chosen[i] = &facet[p[i]];
        mean_into(chosen, sub[k]);
      }
      parity ^= facet_doors(sub, r - 1);
    }
    return parity;
  }

  /// Same arithmetic as canonical_mean, without allocating.
  static void mean_into(std::vector<const Vec*>& pts, Vec& out) {
    std::sort(pts.begin(), pts.end(), [](const Vec* a, const Vec* b) { return lex_less(*a, *b); });
    out = *pts.front();
    for (std::size_t i = 1; i < pts.size(); ++i) out += *pts[i];
    out /= static_cast<double>(pts.size());
  }

  void grow_scratch(std::size_t r, Eigen::Index d) {
    while (scratch_.size() <= r) {
      scratch_.emplace_back(n_ - 1, Vec(d));
      chosen_.emplace_back();
    }
  }

  /// Parity of the number of completely labeled cells r levels below `cell`.
  bool cell_parity(const Cell& cell, std::size_t r) {
    bool parity = false;
    Cell facet(cell.size() - 1);
    for (std::size_t skip = 0; skip < cell.size(); ++skip) {
      for (std::size_t i = 0, j = 0; i < cell.size(); ++i)
        if (i != skip) facet[j++] = cell[i];
      std::vector<const Vec*> sorted;
      for (const Vec& v : facet) sorted.push_back(&v);
      std::sort(sorted.begin(), sorted.end(), [](const Vec* a, const Vec* b) { return lex_less(*a, *b); });
      std::string key(reinterpret_cast<const char*>(&r), sizeof r);
      for (const Vec* v : sorted) key += point_key(*v);
      auto it = facet_memo_.find(key);
      if (it == facet_memo_.end()) it = facet_memo_.emplace(std::move(key), facet_doors(facet, r)).first;
      parity ^= it->second;
    }
    return parity;
  }

  std::vector<Cell> children(const Cell& cell) const {
    std::vector<Cell> out;
    out.reserve(perms_.size());
    for (const Permutation& p : perms_) out.push_back(subdivide_atom(cell, p));
    return out;
  }

  std::size_t top_resolution(const Node& node) const {
    return std::max(node.level + 1 + lookahead_, node.chosen_at) + node.boost;
  }

  /// Fills node.candidates with the odd children at the finest resolution that has any.
  bool expand(Node& node) {
    node.candidates.clear();
    node.candidate_res.clear();
    node.next = 0;
    const std::vector<Cell> kids = children(node.cell);
    if (facet_memo_.size() > 200'000) facet_memo_.clear();
    while (node.boost <= max_boost_) {
      const std::size_t top = top_resolution(node);
      for (std::size_t r = top + 1; r-- > node.min_res;) {
        std::vector<bool> odd(kids.size());
        bool total = false;
        for (std::size_t c = 0; c < kids.size(); ++c) total ^= (odd[c] = cell_parity(kids[c], r - node.level - 1));
        if (!total) continue;
        for (std::size_t c = 0; c < kids.size(); ++c)
          if (odd[c]) {
            node.candidates.push_back(kids[c]);
            node.candidate_res.push_back(r);
          }
        node.min_res = r + 1;
        return true;
      }
      ++node.boost;
    }
    return false;
  }

  /// Extends (or repairs) the path until its last cell sits at `level`.
  bool reach(std::size_t level) {
    while (path_.back().level < level) {
      if (++steps_ > step_budget_) return false;
      Node& node = path_.back();
      if (node.next >= node.candidates.size() && !expand(node)) {
        if (path_.size() == 1) throw AtomError(ErrorCode::NoCompletelyLabeledCell, atom_, "search exhausted at the root");
        path_.pop_back();
        ++backtracks_;
        continue;
      }
      const std::size_t i = node.next++;
      path_.push_back(Node{node.candidates[i], node.level + 1, node.candidate_res[i], 0, node.level + 2, {}, {}, 0});
    }
    return true;
  }

  /// Descends from the final cell at a fixed resolution to a completely labeled cell.
  void certify(AtomOutcome& out) {
    Cell cell = path_.empty() ? problem_.base : path_.back().cell;
    std::size_t level = path_.empty() ? 0 : path_.back().level;
    const std::size_t res = path_.empty() ? 0 : path_.back().chosen_at;
    while (level < res) {
      bool moved = false;
      for (Cell& kid : children(cell))
        if (cell_parity(kid, res - level - 1)) {
          cell = std::move(kid);
          moved = true;
          break;
        }
      if (!moved) break;
      ++level;
    }
    std::vector<int> labels;
    for (const Vec& v : cell) labels.push_back(labeler_(v));
    if (!is_permutation_of_labels(labels, n_)) {
      // Fall back to the deepest completely labeled cell on the path.
      for (auto it = path_.rbegin(); it != path_.rend(); ++it) {
        labels.clear();
        for (const Vec& v : it->cell) labels.push_back(labeler_(v));
        if (is_permutation_of_labels(labels, n_)) {
          cell = it->cell;
          level = it->level;
          break;
        }
      }
    }
    out.certificate_depth = level;
    out.certificate.assign(n_, Vec());
    if (is_permutation_of_labels(labels, n_)) {
      for (std::size_t j = 0; j < n_; ++j) out.certificate[static_cast<std::size_t>(labels[j] - 1)] = cell[j];
      out.certificate_labels.resize(n_);
      std::iota(out.certificate_labels.begin(), out.certificate_labels.end(), 1);
    } else {
      out.certificate = cell;
      out.certificate_labels = labels;
      out.certificate_depth = std::numeric_limits<std::size_t>::max();
    }
  }

  const AtomProblem& problem_;
  const SolverConfig& cfg_;
  std::size_t atom_;
  std::size_t step_budget_;
  std::size_t n_;
  AtomLabeler labeler_;
  std::vector<Permutation> perms_;
  std::vector<Permutation> facet_perms_;
  std::size_t lookahead_ = 0;
  std::size_t max_boost_ = 0;
  std::vector<Node> path_;
  std::vector<Cell> scratch_;
  std::vector<std::vector<const Vec*>> chosen_;
  std::vector<bool> seen_;
  std::unordered_map<std::string, bool> facet_memo_;
  std::size_t steps_ = 0;
  std::size_t backtracks_ = 0;
};

/// Cheap lookahead first; the budget-sized one only when the cheap search runs dry.
inline constexpr std::size_t kFirstLookahead = 6;

inline AtomOutcome descend(const AtomProblem& problem, const SolverConfig& cfg, std::size_t atom) {
  std::vector<int> schedule;
  if (cfg.lookahead >= 0) {
    schedule.push_back(cfg.lookahead);
  } else {
    const std::size_t full = ParityDescent::auto_lookahead(problem.base.size(), cfg.cell_budget);
    if (full > kFirstLookahead) schedule.push_back(static_cast<int>(kFirstLookahead));
    schedule.push_back(static_cast<int>(full));
  }
  std::size_t backtracks = 0;
  for (std::size_t i = 0;; ++i) {
    const bool last = i + 1 == schedule.size();
    SolverConfig attempt = cfg;
    attempt.lookahead = schedule[i];
    try {
      const std::size_t steps = last ? 64 * cfg.max_rounds + 1024 : 8 * cfg.max_rounds + 256;
      AtomOutcome out = ParityDescent(problem, attempt, atom, steps).run();
      backtracks += out.backtracks;
      if (out.status != SolveStatus::SearchExhausted || last) {
        out.backtracks = backtracks;
        return out;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoCompletelyLabeledCell || last) throw;
    }
  }
}

}  // namespace detail
}  // namespace cbrouwer

#endif  // CBROUWER_DESCENT_HPP
