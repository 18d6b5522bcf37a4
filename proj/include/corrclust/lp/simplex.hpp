#pragma once

// Bounded-variable revised primal simplex over a generic scalar, with devex
// pricing in floating point. The basis inverse is kept explicitly and updated
// by rank-one eliminations; rows can be activated lazily, which keeps large
// families of mostly slack inequalities out of the basis.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <type_traits>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace corrclust::lp {

template <typename Scalar>
struct Bound {
  bool has_lower = false;
  bool has_upper = false;
  Scalar lower{};
  Scalar upper{};
};

// lower_i <= a_i . y <= upper_i for every row, box bounds on every column,
// minimize cost . y.
template <typename Scalar>
struct StandardForm {
  int rows = 0;
  int cols = 0;
  std::vector<std::vector<std::pair<int, Scalar>>> columns;  // (row, coefficient)
  std::vector<std::vector<std::pair<int, Scalar>>> row_terms;  // (column, coefficient)
  std::vector<Bound<Scalar>> row_bounds;
  std::vector<Bound<Scalar>> col_bounds;
  std::vector<Scalar> cost;
  std::vector<bool> start_active;  // rows present from the first iteration
};

enum class SimplexStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericFailure };

struct SimplexSettings {
  double tolerance = 1e-9;  // ignored for exact scalars
  int max_iterations = 500000;
  int refactor_interval = 0;  // 0 picks max(100, active rows)
  int lazy_batch = 0;         // rows added per round; 0 picks max(64, active / 4)
};

template <typename Scalar>
struct SimplexResult {
  SimplexStatus status = SimplexStatus::kNumericFailure;
  std::vector<Scalar> primal;
  Scalar objective{};
  // At infeasibility: phase-one duals pi per row (0 for inactive rows) and
  // d_j = -pi . a_j per column.
  std::vector<Scalar> row_duals;
  std::vector<Scalar> reduced_costs;
  Scalar infeasibility{};
  int iterations = 0;
  int active_rows = 0;
};

template <typename Scalar>
constexpr bool kExactScalar = !std::is_floating_point_v<Scalar>;

template <typename Scalar>
double to_double(const Scalar& v) {
  if constexpr (std::is_floating_point_v<Scalar>) return static_cast<double>(v);
  else return v.template convert_to<double>();
}

template <typename Scalar>
class BoundedSimplex {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  BoundedSimplex(const StandardForm<Scalar>& lp, const SimplexSettings& settings)
      : lp_(lp), settings_(settings), n_(lp.cols), m_all_(lp.rows) {
    if constexpr (kExactScalar<Scalar>) {
      tol_ = Scalar(0);
    } else {
      tol_ = Scalar(settings.tolerance);
    }
  }

  SimplexResult<Scalar> solve() {
    initialize();
    SimplexResult<Scalar> out;
    while (true) {
      phase_one_ = true;
      SimplexStatus s = run_phase();
      if (s != SimplexStatus::kOptimal) return finish(out, s);
      if (artificial_mass() > tol_) {
        fill_farkas(out);
        return finish(out, SimplexStatus::kInfeasible);
      }
      retire_artificials();
      phase_one_ = false;
      if (has_cost_) {
        s = run_phase();
        if (s != SimplexStatus::kOptimal) return finish(out, s);
      }
      if (!kExactScalar<Scalar>) refactor();
      if (!activate_violated_rows()) break;
    }
    if (!kExactScalar<Scalar> && max_active_violation() > 1e3 * tol_) {
      return finish(out, SimplexStatus::kNumericFailure);
    }
    return finish(out, SimplexStatus::kOptimal);
  }

 private:
  enum class State : std::uint8_t { kBasic, kLower, kUpper, kFree, kAbsent };

  static Scalar abs_of(const Scalar& v) { return v < Scalar(0) ? Scalar(-v) : v; }

  bool is_slack(int k) const { return k >= n_ && k < n_ + m_all_; }
  bool is_artificial(int k) const { return k >= n_ + m_all_; }
  int row_of(int k) const { return is_slack(k) ? k - n_ : k - n_ - m_all_; }
  int slack_of(int row) const { return n_ + row; }
  int artificial_of(int row) const { return n_ + m_all_ + row; }
  int active_count() const { return static_cast<int>(active_.size()); }

  template <typename F>
  void for_column(int k, F&& f) const {
    if (k < n_) {
      for (const auto& [row, a] : lp_.columns[k]) {
        const int p = pos_of_[row];
        if (p >= 0) f(p, a);
      }
    } else if (is_slack(k)) {
      f(pos_of_[row_of(k)], Scalar(-1));
    } else {
      f(pos_of_[row_of(k)], sigma_[row_of(k)]);
    }
  }

  Scalar cost_of(int k) const {
    if (phase_one_) return is_artificial(k) && !has_upper_[k] ? Scalar(1) : Scalar(0);
    return k < n_ ? lp_.cost[k] : Scalar(0);
  }

  void initialize() {
    const int total = n_ + 2 * m_all_;
    value_.assign(total, Scalar(0));
    lower_.assign(total, Scalar(0));
    upper_.assign(total, Scalar(0));
    has_lower_.assign(total, false);
    has_upper_.assign(total, false);
    state_.assign(total, State::kAbsent);
    basis_pos_.assign(total, -1);
    sigma_.assign(m_all_, Scalar(1));
    pos_of_.assign(m_all_, -1);
    has_cost_ = false;
    for (int j = 0; j < n_; ++j) {
      const auto& b = lp_.col_bounds[j];
      has_lower_[j] = b.has_lower;
      has_upper_[j] = b.has_upper;
      lower_[j] = b.lower;
      upper_[j] = b.upper;
      if (b.has_lower) {
        value_[j] = b.lower;
        state_[j] = State::kLower;
      } else if (b.has_upper) {
        value_[j] = b.upper;
        state_[j] = State::kUpper;
      } else {
        value_[j] = Scalar(0);
        state_[j] = State::kFree;
      }
      if (lp_.cost[j] != Scalar(0)) has_cost_ = true;
    }
    for (int i = 0; i < m_all_; ++i) {
      const auto& b = lp_.row_bounds[i];
      const int s = slack_of(i);
      has_lower_[s] = b.has_lower;
      has_upper_[s] = b.has_upper;
      lower_[s] = b.lower;
      upper_[s] = b.upper;
    }
    active_.clear();
    head_.clear();
    binv_.resize(0, 0);
    std::vector<int> initial;
    for (int i = 0; i < m_all_; ++i)
      if (lp_.start_active[i] || violation(i) > tol_) initial.push_back(i);
    add_rows(initial);
  }

  Scalar activity(int row) const {
    Scalar act(0);
    for (const auto& [j, a] : lp_.row_terms[row]) act += a * value_[j];
    return act;
  }

  Scalar violation(int row) const {
    const Scalar act = activity(row);
    const int s = slack_of(row);
    if (has_lower_[s] && act < lower_[s]) return lower_[s] - act;
    if (has_upper_[s] && act > upper_[s]) return act - upper_[s];
    return Scalar(0);
  }

  // Appends rows with their slack (or an artificial, if violated) basic and
  // extends the basis inverse by the block formula.
  void add_rows(const std::vector<int>& rows) {
    if (rows.empty()) return;
    const int old = active_count();
    const int k = static_cast<int>(rows.size());
    std::vector<Scalar> diag(k);
    for (int t = 0; t < k; ++t) {
      const int i = rows[t];
      const Scalar act = activity(i);
      const int s = slack_of(i);
      const int p = old + t;
      pos_of_[i] = p;
      active_.push_back(i);
      int basic = s;
      Scalar target = act;
      if (has_lower_[s] && act < lower_[s]) target = lower_[s];
      else if (has_upper_[s] && act > upper_[s]) target = upper_[s];
      if (target == act) {
        value_[s] = act;
        state_[s] = State::kBasic;
        diag[t] = Scalar(-1);
      } else {
        value_[s] = target;
        state_[s] = target == lower_[s] && has_lower_[s] ? State::kLower : State::kUpper;
        const int a = artificial_of(i);
        sigma_[i] = target > act ? Scalar(1) : Scalar(-1);
        value_[a] = abs_of(target - act);
        has_lower_[a] = true;
        lower_[a] = Scalar(0);
        has_upper_[a] = false;
        state_[a] = State::kBasic;
        basic = a;
        diag[t] = sigma_[i];
      }
      head_.push_back(basic);
      basis_pos_[basic] = p;
    }
    Matrix grown = Matrix::Zero(old + k, old + k);
    grown.topLeftCorner(old, old) = binv_;
    for (int t = 0; t < k; ++t) {
      const int p = old + t;
      const Scalar inv = Scalar(1) / diag[t];
      grown(p, p) = inv;
      for (const auto& [j, a] : lp_.row_terms[rows[t]]) {
        const int q = basis_pos_[j];
        if (q >= 0 && q < old) grown.row(p).head(old) -= (a * inv) * binv_.row(q);
      }
    }
    binv_ = std::move(grown);
    since_refactor_ = 0;
  }

  Scalar artificial_mass() const {
    Scalar mass(0);
    for (int p = 0; p < active_count(); ++p) {
      const int b = head_[p];
      if (is_artificial(b) && !has_upper_[b] && value_[b] > Scalar(0)) mass += value_[b];
    }
    return mass;
  }

  void retire_artificials() {
    for (int i : active_) {
      const int a = artificial_of(i);
      if (state_[a] == State::kAbsent) continue;
      has_upper_[a] = true;
      upper_[a] = Scalar(0);
      if (state_[a] != State::kBasic) {
        value_[a] = Scalar(0);
        state_[a] = State::kLower;
      }
    }
  }

  Vector duals() const {
    Vector pi = Vector::Zero(active_count());
    for (int p = 0; p < active_count(); ++p) {
      const Scalar c = cost_of(head_[p]);
      if (c != Scalar(0)) pi += c * binv_.row(p).transpose();
    }
    return pi;
  }

  Scalar reduced_cost(int k, const Vector& pi) const {
    Scalar d = cost_of(k);
    for_column(k, [&](int p, const Scalar& a) { d -= pi[p] * a; });
    return d;
  }

  bool can_move(int k) const { return !(has_lower_[k] && has_upper_[k] && lower_[k] == upper_[k]); }

  // Entering column and direction (+1 increase, -1 decrease), or -1.
  std::pair<int, int> price(const Vector& pi, bool bland) const {
    int best = -1, dir = 0;
    Scalar best_score(0);
    const int total = n_ + 2 * m_all_;
    for (int k = 0; k < total; ++k) {
      const State st = state_[k];
      if (st == State::kBasic || st == State::kAbsent) continue;
      if (k >= n_ && pos_of_[row_of(k)] < 0) continue;
      if (!can_move(k)) continue;
      const Scalar d = reduced_cost(k, pi);
      int want = 0;
      if ((st == State::kLower || st == State::kFree) && d < -tol_) want = 1;
      else if ((st == State::kUpper || st == State::kFree) && d > tol_) want = -1;
      if (want == 0) continue;
      if (bland) return {k, want};
      Scalar score;
      if constexpr (kExactScalar<Scalar>) score = abs_of(d);
      else score = d * d / weight_[k];
      if (best < 0 || score > best_score) {
        best = k;
        dir = want;
        best_score = score;
      }
    }
    return {best, dir};
  }

  Vector column_image(int k) const {
    Vector alpha = Vector::Zero(active_count());
    for_column(k, [&](int p, const Scalar& a) { alpha += a * binv_.col(p); });
    return alpha;
  }

  struct Step {
    int leave_pos = -1;  // -1 with finite t means a bound flip
    Scalar t{};
    bool bounded = false;
    bool to_lower = true;  // bound the leaving variable hits
  };

  Step ratio_test(int q, int dir, const Vector& alpha, bool bland) const {
    Step step;
    const Scalar piv = kExactScalar<Scalar> ? Scalar(0) : Scalar(1e-9);
    // Harris pass: largest step keeping every basic variable within tol.
    bool any = false;
    Scalar relaxed(0);
    for (int p = 0; p < active_count(); ++p) {
      const Scalar rate = -Scalar(dir) * alpha[p];
      if (abs_of(rate) <= piv) continue;
      const int b = head_[p];
      Scalar limit;
      if (rate < Scalar(0)) {
        if (!has_lower_[b]) continue;
        limit = (value_[b] - lower_[b] + tol_) / -rate;
      } else {
        if (!has_upper_[b]) continue;
        limit = (upper_[b] + tol_ - value_[b]) / rate;
      }
      if (!any || limit < relaxed) relaxed = limit;
      any = true;
    }
    const bool entering_boxed = has_lower_[q] && has_upper_[q];
    const Scalar range = entering_boxed ? upper_[q] - lower_[q] : Scalar(0);
    if (!any) {
      if (entering_boxed) {
        step.bounded = true;
        step.t = range;
      }
      return step;
    }
    // Step to the bound of basic position p, if it limits the move.
    auto limit_at = [&](int p, Scalar& exact, bool& to_lower) {
      const Scalar rate = -Scalar(dir) * alpha[p];
      if (abs_of(rate) <= piv) return false;
      const int b = head_[p];
      if (rate < Scalar(0)) {
        if (!has_lower_[b]) return false;
        exact = (value_[b] - lower_[b]) / -rate;
        to_lower = true;
      } else {
        if (!has_upper_[b]) return false;
        exact = (upper_[b] - value_[b]) / rate;
        to_lower = false;
      }
      if (exact > relaxed) return false;
      if (exact < Scalar(0)) exact = Scalar(0);
      return true;
    };
    // Bland's rule must not pick a pivot far smaller than the best available
    // one, or the basis drifts towards singularity in floating point.
    Scalar floor_alpha(0);
    if (bland && !kExactScalar<Scalar>) {
      Scalar exact;
      bool to_lower;
      for (int p = 0; p < active_count(); ++p)
        if (limit_at(p, exact, to_lower)) floor_alpha = std::max(floor_alpha, abs_of(alpha[p]));
      floor_alpha *= Scalar(1e-3);
    }
    // Second pass: among steps within the relaxed limit pick the largest pivot.
    Scalar best_alpha(0);
    for (int p = 0; p < active_count(); ++p) {
      Scalar exact;
      bool to_lower;
      if (!limit_at(p, exact, to_lower)) continue;
      const Scalar mag = abs_of(alpha[p]);
      if (mag < floor_alpha) continue;
      bool take;
      if (step.leave_pos < 0) {
        take = true;
      } else if (bland || kExactScalar<Scalar>) {
        // Exact minimum ratio; ties go to the smallest column index.
        take = exact < step.t || (exact == step.t && head_[p] < head_[step.leave_pos]);
      } else {
        take = mag > best_alpha;
      }
      if (take) {
        step.leave_pos = p;
        step.t = exact;
        step.to_lower = to_lower;
        best_alpha = mag;
      }
    }
    step.bounded = true;
    if (entering_boxed && (step.leave_pos < 0 || range <= step.t)) {
      step.leave_pos = -1;
      step.t = range;
    }
    return step;
  }

  void pivot(int r, const Vector& alpha) {
    const Scalar inv = Scalar(1) / alpha[r];
    binv_.row(r) *= inv;
    for (int p = 0; p < active_count(); ++p) {
      if (p == r || alpha[p] == Scalar(0)) continue;
      binv_.row(p) -= alpha[p] * binv_.row(r);
    }
  }

  // Devex reference weights: after the pivot on row r, every nonbasic column
  // keeps the larger of its weight and (alpha_rj / alpha_r)^2 times the
  // entering weight.
  void update_weights(int q, int r, const Vector& alpha) {
    const Vector rho = binv_.row(r).transpose();
    const double ar = to_double(alpha[r]);
    const double wq = weight_[q];
    const int total = n_ + 2 * m_all_;
    for (int k = 0; k < total; ++k) {
      const State st = state_[k];
      if (k == q || st == State::kBasic || st == State::kAbsent) continue;
      if (k >= n_ && pos_of_[row_of(k)] < 0) continue;
      double ark = 0.0;
      for_column(k, [&](int p, const Scalar& a) { ark += to_double(a * rho[p]); });
      if (ark == 0.0) continue;
      const double ratio = ark / ar;
      weight_[k] = std::max(weight_[k], ratio * ratio * wq);
    }
    weight_[head_[r]] = std::max(wq / (ar * ar), 1.0);
  }

  SimplexStatus run_phase() {
    if constexpr (!kExactScalar<Scalar>) weight_.assign(n_ + 2 * m_all_, 1.0);
    int degenerate_run = 0;
    while (true) {
      if (phase_one_ && artificial_mass() <= tol_) return SimplexStatus::kOptimal;
      if (iterations_ >= settings_.max_iterations) return SimplexStatus::kIterationLimit;
      if constexpr (!kExactScalar<Scalar>) {
        const int interval =
            settings_.refactor_interval > 0 ? settings_.refactor_interval : std::max(100, active_count());
        if (since_refactor_ >= interval && !refactor()) return SimplexStatus::kNumericFailure;
      }
      // Bland's rule only as a cycling guard; switching early stalls the
      // highly degenerate lifted programs for tens of thousands of pivots.
      const bool bland = degenerate_run > 1000;
      const Vector pi = duals();
      const auto [q, dir] = price(pi, bland);
      if (q < 0) return SimplexStatus::kOptimal;
      const Vector alpha = column_image(q);
      const Step step = ratio_test(q, dir, alpha, bland);
      if (!step.bounded) return phase_one_ ? SimplexStatus::kNumericFailure : SimplexStatus::kUnbounded;
      ++iterations_;
      ++since_refactor_;
      const Scalar t = step.t;
      degenerate_run = t <= tol_ ? degenerate_run + 1 : 0;
      if (t != Scalar(0)) {
        value_[q] += Scalar(dir) * t;
        for (int p = 0; p < active_count(); ++p)
          if (alpha[p] != Scalar(0)) value_[head_[p]] -= Scalar(dir) * alpha[p] * t;
      }
      if (step.leave_pos < 0) {
        // Bound flip of the entering variable.
        if (dir > 0) {
          value_[q] = upper_[q];
          state_[q] = State::kUpper;
        } else {
          value_[q] = lower_[q];
          state_[q] = State::kLower;
        }
        continue;
      }
      const int r = step.leave_pos;
      if constexpr (!kExactScalar<Scalar>) update_weights(q, r, alpha);
      const int b = head_[r];
      if (step.to_lower) {
        value_[b] = lower_[b];
        state_[b] = State::kLower;
      } else {
        value_[b] = upper_[b];
        state_[b] = State::kUpper;
      }
      if (is_artificial(b)) {
        // An artificial that left is never needed again.
        value_[b] = Scalar(0);
        has_upper_[b] = true;
        upper_[b] = Scalar(0);
        state_[b] = State::kLower;
      }
      basis_pos_[b] = -1;
      head_[r] = q;
      basis_pos_[q] = r;
      state_[q] = State::kBasic;
      pivot(r, alpha);
    }
  }

  // Recomputes the inverse and the basic values from scratch.
  bool refactor() {
    if constexpr (kExactScalar<Scalar>) {
      return true;
    } else {
      const int m = active_count();
      since_refactor_ = 0;
      if (m == 0) return true;
      Matrix basis = Matrix::Zero(m, m);
      for (int p = 0; p < m; ++p)
        for_column(head_[p], [&](int row, const Scalar& a) { basis(row, p) = a; });
      Eigen::PartialPivLU<Matrix> lu(basis);
      Vector rhs = Vector::Zero(m);
      const int total = n_ + 2 * m_all_;
      for (int k = 0; k < total; ++k) {
        if (state_[k] == State::kBasic || state_[k] == State::kAbsent) continue;
        if (k >= n_ && pos_of_[row_of(k)] < 0) continue;
        if (value_[k] == Scalar(0)) continue;
        const Scalar z = value_[k];
        for_column(k, [&](int p, const Scalar& a) { rhs[p] -= a * z; });
      }
      Vector xb = lu.solve(rhs);
      // One step of iterative refinement.
      xb += lu.solve(rhs - basis * xb);
      if (!xb.allFinite()) return false;
      binv_ = lu.inverse();
      if (!binv_.allFinite()) return false;
      for (int p = 0; p < m; ++p) value_[head_[p]] = xb[p];
      return true;
    }
  }

  Scalar max_active_violation() const {
    Scalar worst(0);
    for (int i : active_) worst = std::max(worst, violation(i));
    for (int j = 0; j < n_; ++j) {
      if (has_lower_[j]) worst = std::max(worst, lower_[j] - value_[j]);
      if (has_upper_[j]) worst = std::max(worst, value_[j] - upper_[j]);
    }
    return worst;
  }

  // Adds the most violated inactive rows; false if none is violated.
  bool activate_violated_rows() {
    std::vector<std::pair<Scalar, int>> violated;
    for (int i = 0; i < m_all_; ++i) {
      if (pos_of_[i] >= 0) continue;
      const Scalar v = violation(i);
      if (v > tol_) violated.emplace_back(v, i);
    }
    if (violated.empty()) return false;
    const int batch = settings_.lazy_batch > 0 ? settings_.lazy_batch : std::max(64, active_count() / 4);
    if (static_cast<int>(violated.size()) > batch) {
      std::partial_sort(violated.begin(), violated.begin() + batch, violated.end(),
                        [](const auto& a, const auto& b) {
                          return a.first > b.first || (a.first == b.first && a.second < b.second);
                        });
      violated.resize(batch);
    }
    std::vector<int> rows;
    for (const auto& v : violated) rows.push_back(v.second);
    std::sort(rows.begin(), rows.end());
    add_rows(rows);
    return true;
  }

  void fill_farkas(SimplexResult<Scalar>& out) const {
    const Vector pi = duals();
    out.row_duals.assign(m_all_, Scalar(0));
    for (int p = 0; p < active_count(); ++p) out.row_duals[active_[p]] = pi[p];
    out.reduced_costs.assign(n_, Scalar(0));
    for (int j = 0; j < n_; ++j) {
      Scalar d(0);
      for (const auto& [row, a] : lp_.columns[j]) d -= out.row_duals[row] * a;
      out.reduced_costs[j] = d;
    }
    out.infeasibility = artificial_mass();
  }

  SimplexResult<Scalar>& finish(SimplexResult<Scalar>& out, SimplexStatus status) {
    out.status = status;
    out.primal.assign(value_.begin(), value_.begin() + n_);
    out.objective = Scalar(0);
    for (int j = 0; j < n_; ++j) out.objective += lp_.cost[j] * value_[j];
    out.iterations = iterations_;
    out.active_rows = active_count();
    return out;
  }

  const StandardForm<Scalar>& lp_;
  SimplexSettings settings_;
  int n_;
  int m_all_;
  Scalar tol_{};
  bool phase_one_ = true;
  bool has_cost_ = false;
  int iterations_ = 0;
  int since_refactor_ = 0;

  std::vector<Scalar> value_, lower_, upper_;
  std::vector<bool> has_lower_, has_upper_;
  std::vector<State> state_;
  std::vector<int> basis_pos_;
  std::vector<Scalar> sigma_;
  std::vector<double> weight_;
  std::vector<int> active_;  // position -> row
  std::vector<int> pos_of_;  // row -> position, -1 if inactive
  std::vector<int> head_;    // position -> basic column
  Matrix binv_;
};

template <typename Scalar>
SimplexResult<Scalar> simplex_solve(const StandardForm<Scalar>& lp, const SimplexSettings& settings = {}) {
  BoundedSimplex<Scalar> solver(lp, settings);
  return solver.solve();
}

}  // namespace corrclust::lp
