#include "corrclust/lp/program.hpp"

#include <unordered_map>

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/multiprecision/eigen.hpp>

#include "corrclust/lp/simplex.hpp"

namespace corrclust::lp {

using Rational = boost::multiprecision::number<boost::multiprecision::cpp_rational_backend,
                                               boost::multiprecision::et_off>;

LinearProgram::LinearProgram(std::string name, int parameter_count)
    : name_(std::move(name)), theta_(Eigen::VectorXd::Zero(parameter_count)) {}

int LinearProgram::add_variable(std::string name, double lower, double upper, double cost) {
  if (std::isnan(lower) || std::isnan(upper) || lower > upper || lower == kInfinity ||
      upper == -kInfinity || !std::isfinite(cost))
    throw std::invalid_argument("bad bounds or cost for variable " + name);
  variables_.push_back({std::move(name), lower, upper, cost});
  return variable_count() - 1;
}

int LinearProgram::add_row(std::vector<Term> terms, RowSense sense, double rhs, std::string label,
                           std::vector<Term> rhs_param) {
  for (const Term& t : terms)
    if (t.index < 0 || t.index >= variable_count() || !std::isfinite(t.coef))
      throw std::invalid_argument("row references an undeclared variable: " + label);
  for (const Term& t : rhs_param)
    if (t.index < 0 || t.index >= parameter_count() || !std::isfinite(t.coef))
      throw std::invalid_argument("row references an undeclared parameter: " + label);
  if (!std::isfinite(rhs)) throw std::invalid_argument("non-finite right-hand side: " + label);
  rows_.push_back({std::move(terms), sense, rhs, std::move(rhs_param), std::move(label)});
  return row_count() - 1;
}

void LinearProgram::set_parameters(Eigen::VectorXd theta) {
  if (theta.size() != theta_.size()) throw std::invalid_argument("parameter size mismatch");
  theta_ = std::move(theta);
}

void LinearProgram::set_cost(int j, double cost) {
  if (j < 0 || j >= variable_count() || !std::isfinite(cost)) throw std::invalid_argument("bad cost update");
  variables_[j].cost = cost;
}

double LinearProgram::effective_rhs(int i) const {
  double v = rows_[i].rhs;
  for (const Term& t : rows_[i].rhs_param) v += t.coef * theta_[t.index];
  return v;
}

double LinearProgram::activity(int i, const Eigen::VectorXd& y) const {
  double v = 0.0;
  for (const Term& t : rows_[i].terms) v += t.coef * y[t.index];
  return v;
}

double LinearProgram::max_violation(const Eigen::VectorXd& y) const {
  if (y.size() != variable_count()) throw std::invalid_argument("point size mismatch");
  double worst = 0.0;
  for (int j = 0; j < variable_count(); ++j) {
    worst = std::max(worst, variables_[j].lower - y[j]);
    worst = std::max(worst, y[j] - variables_[j].upper);
  }
  for (int i = 0; i < row_count(); ++i) {
    const double act = activity(i, y), rhs = effective_rhs(i);
    if (rows_[i].sense != RowSense::kGreaterEqual) worst = std::max(worst, act - rhs);
    if (rows_[i].sense != RowSense::kLessEqual) worst = std::max(worst, rhs - act);
  }
  return worst;
}

double LinearProgram::objective(const Eigen::VectorXd& y) const {
  double v = objective_constant_;
  for (int j = 0; j < variable_count(); ++j) v += variables_[j].cost * y[j];
  return v;
}

const char* lp_status_name(LpStatus s) {
  switch (s) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kNumericFailure: return "numeric_failure";
  }
  return "?";
}

namespace {

template <typename Scalar>
Scalar exact_rhs(const LinearProgram& lp, int i) {
  const Row& row = lp.row(i);
  Scalar v(row.rhs);
  for (const Term& t : row.rhs_param) v += Scalar(t.coef) * Scalar(lp.parameters()[t.index]);
  return v;
}

template <typename Scalar>
StandardForm<Scalar> standardize(const LinearProgram& lp, const SolveOptions& options) {
  StandardForm<Scalar> f;
  f.rows = lp.row_count();
  f.cols = lp.variable_count();
  f.columns.resize(f.cols);
  f.row_terms.resize(f.rows);
  f.row_bounds.resize(f.rows);
  f.col_bounds.resize(f.cols);
  f.cost.resize(f.cols);
  f.start_active.assign(f.rows, f.rows <= options.lazy_row_threshold);
  for (int j = 0; j < f.cols; ++j) {
    const Variable& v = lp.variable(j);
    auto& b = f.col_bounds[j];
    b.has_lower = std::isfinite(v.lower);
    b.has_upper = std::isfinite(v.upper);
    if (b.has_lower) b.lower = Scalar(v.lower);
    if (b.has_upper) b.upper = Scalar(v.upper);
    f.cost[j] = Scalar(v.cost);
  }
  for (int i = 0; i < f.rows; ++i) {
    const Row& row = lp.row(i);
    // Merge repeated variables within a row.
    std::vector<std::pair<int, Scalar>> terms;
    for (const Term& t : row.terms) {
      auto it = std::find_if(terms.begin(), terms.end(), [&](const auto& e) { return e.first == t.index; });
      if (it == terms.end()) terms.emplace_back(t.index, Scalar(t.coef));
      else it->second += Scalar(t.coef);
    }
    for (const auto& [j, a] : terms) {
      if (a == Scalar(0)) continue;
      f.row_terms[i].emplace_back(j, a);
      f.columns[j].emplace_back(i, a);
    }
    const Scalar rhs = exact_rhs<Scalar>(lp, i);
    auto& b = f.row_bounds[i];
    b.has_lower = row.sense != RowSense::kLessEqual;
    b.has_upper = row.sense != RowSense::kGreaterEqual;
    b.lower = b.upper = rhs;
    if (row.sense == RowSense::kEqual) f.start_active[i] = true;
  }
  return f;
}

template <typename Scalar>
LpResult run(const LinearProgram& lp, const SolveOptions& options, Arithmetic arithmetic) {
  const StandardForm<Scalar> form = standardize<Scalar>(lp, options);
  SimplexSettings settings;
  settings.tolerance = kTolerance;
  settings.max_iterations = options.max_iterations;
  const SimplexResult<Scalar> r = simplex_solve(form, settings);
  LpResult out;
  out.arithmetic = arithmetic;
  out.iterations = r.iterations;
  out.active_rows = r.active_rows;
  out.values.resize(lp.variable_count());
  for (int j = 0; j < lp.variable_count(); ++j) out.values[j] = to_double(r.primal[j]);
  switch (r.status) {
    case SimplexStatus::kOptimal: out.status = LpStatus::kOptimal; break;
    case SimplexStatus::kInfeasible: out.status = LpStatus::kInfeasible; break;
    case SimplexStatus::kUnbounded: out.status = LpStatus::kUnbounded; break;
    default: out.status = LpStatus::kNumericFailure; break;
  }
  if (out.status == LpStatus::kInfeasible) {
    FarkasWitness w;
    w.row_multipliers.resize(lp.row_count());
    w.reduced_costs.resize(lp.variable_count());
    for (int i = 0; i < lp.row_count(); ++i) w.row_multipliers[i] = to_double(r.row_duals[i]);
    for (int j = 0; j < lp.variable_count(); ++j) w.reduced_costs[j] = to_double(r.reduced_costs[j]);
    w.infeasibility = to_double(r.infeasibility);
    out.farkas = std::move(w);
  }
  out.objective = lp.objective(out.values);
  out.max_violation = lp.max_violation(out.values);
  return out;
}

bool trustworthy(const LinearProgram& lp, const LpResult& r) {
  if (r.status == LpStatus::kOptimal) return r.max_violation <= 1e-7;
  if (r.status == LpStatus::kInfeasible) return r.farkas && farkas_margin(lp, *r.farkas) > 1e-9;
  return r.status == LpStatus::kUnbounded;
}

}  // namespace

double farkas_margin(const LinearProgram& lp, const FarkasWitness& w) {
  // Smallest value of sum_j d_j y_j + sum_i pi_i s_i over the boxes; positive
  // means the rows cannot hold together.
  constexpr double kZero = 1e-11;
  double total = 0.0;
  for (int j = 0; j < lp.variable_count(); ++j) {
    const double d = w.reduced_costs[j];
    if (std::abs(d) <= kZero) continue;
    const double bound = d > 0 ? lp.variable(j).lower : lp.variable(j).upper;
    if (!std::isfinite(bound)) return -kInfinity;
    total += d * bound;
  }
  for (int i = 0; i < lp.row_count(); ++i) {
    const double pi = w.row_multipliers[i];
    if (std::abs(pi) <= kZero) continue;
    const RowSense s = lp.row(i).sense;
    if ((pi > 0 && s == RowSense::kLessEqual) || (pi < 0 && s == RowSense::kGreaterEqual))
      return -kInfinity;
    total += pi * lp.effective_rhs(i);
  }
  return total;
}

LpResult solve(const LinearProgram& lp, const SolveOptions& options) {
  if (options.arithmetic == Arithmetic::kRational) return run<Rational>(lp, options, Arithmetic::kRational);
  LpResult r = run<double>(lp, options, Arithmetic::kDouble);
  const long size = static_cast<long>(lp.row_count() + 1) * (lp.variable_count() + 1);
  if (!trustworthy(lp, r) && size <= options.rational_fallback_limit)
    return run<Rational>(lp, options, Arithmetic::kRational);
  if (r.status == LpStatus::kOptimal && r.max_violation > 1e-7) r.status = LpStatus::kNumericFailure;
  if (r.status == LpStatus::kInfeasible && !(farkas_margin(lp, *r.farkas) > 1e-9))
    r.status = LpStatus::kNumericFailure;
  return r;
}

std::optional<FarkasWitness> transfer_farkas(const LinearProgram& from, const FarkasWitness& w,
                                             const LinearProgram& to) {
  std::unordered_map<std::string, int> row_of;
  for (int i = 0; i < to.row_count(); ++i) row_of.emplace(to.row(i).label, i);
  FarkasWitness out;
  out.row_multipliers = Eigen::VectorXd::Zero(to.row_count());
  out.reduced_costs = Eigen::VectorXd::Zero(to.variable_count());
  for (int i = 0; i < from.row_count(); ++i) {
    if (w.row_multipliers[i] == 0.0) continue;
    auto it = row_of.find(from.row(i).label);
    if (it == row_of.end() || from.row(i).label.empty()) return std::nullopt;
    out.row_multipliers[it->second] = w.row_multipliers[i];
  }
  for (int i = 0; i < to.row_count(); ++i)
    for (const Term& t : to.row(i).terms) out.reduced_costs[t.index] -= out.row_multipliers[i] * t.coef;
  out.infeasibility = w.infeasibility;
  return out;
}

namespace {

void write_terms(std::ostream& out, const std::vector<Term>& terms, const LinearProgram& lp) {
  if (terms.empty()) out << " 0";
  for (const Term& t : terms) {
    out << (t.coef < 0 ? " - " : " + ");
    const double mag = std::abs(t.coef);
    if (mag != 1.0) out << mag << ' ';
    out << lp.variable(t.index).name;
  }
}

}  // namespace

void write_lp(std::ostream& out, const LinearProgram& lp) {
  out << "\\ " << lp.name() << '\n' << "Minimize\n obj:";
  std::vector<Term> obj;
  for (int j = 0; j < lp.variable_count(); ++j)
    if (lp.variable(j).cost != 0.0) obj.push_back({j, lp.variable(j).cost});
  write_terms(out, obj, lp);
  if (lp.objective_constant() != 0.0) out << " + " << lp.objective_constant();
  out << "\nSubject To\n";
  for (int i = 0; i < lp.row_count(); ++i) {
    const Row& row = lp.row(i);
    out << ' ' << (row.label.empty() ? "r" + std::to_string(i) : row.label) << ':';
    write_terms(out, row.terms, lp);
    out << (row.sense == RowSense::kLessEqual ? " <= " : row.sense == RowSense::kGreaterEqual ? " >= " : " = ")
        << lp.effective_rhs(i);
    if (!row.rhs_param.empty()) {
      out << "  \\ " << row.rhs;
      for (const Term& t : row.rhs_param) out << " + " << t.coef << " theta" << t.index;
    }
    out << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < lp.variable_count(); ++j) {
    const Variable& v = lp.variable(j);
    out << ' ';
    if (std::isfinite(v.lower)) out << v.lower;
    else out << "-inf";
    out << " <= " << v.name << " <= ";
    if (std::isfinite(v.upper)) out << v.upper;
    else out << "+inf";
    out << '\n';
  }
  out << "End\n";
}

}  // namespace corrclust::lp
