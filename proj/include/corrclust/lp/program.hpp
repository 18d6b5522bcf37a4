#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace corrclust::lp {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();
inline constexpr double kTolerance = 1e-9;

enum class RowSense { kLessEqual, kGreaterEqual, kEqual };

struct Term {
  int index = 0;
  double coef = 0.0;
};

// terms . y  (sense)  rhs + rhs_param . theta, where theta is the program's
// parameter vector (the metric x for the lifted relaxations).
struct Row {
  std::vector<Term> terms;
  RowSense sense = RowSense::kLessEqual;
  double rhs = 0.0;
  std::vector<Term> rhs_param;
  std::string label;
};

struct Variable {
  std::string name;
  double lower = 0.0;
  double upper = kInfinity;
  double cost = 0.0;
};

// Minimization LP with sparse rows and a right-hand side that may depend
// linearly on a parameter vector.
class LinearProgram {
 public:
  explicit LinearProgram(std::string name = "lp", int parameter_count = 0);

  int add_variable(std::string name, double lower, double upper, double cost = 0.0);
  // Throws std::invalid_argument on an undeclared variable or parameter.
  int add_row(std::vector<Term> terms, RowSense sense, double rhs, std::string label = {},
              std::vector<Term> rhs_param = {});

  void set_parameters(Eigen::VectorXd theta);
  void set_cost(int j, double cost);
  void set_objective_constant(double c) { objective_constant_ = c; }

  const std::string& name() const { return name_; }
  int variable_count() const { return static_cast<int>(variables_.size()); }
  int row_count() const { return static_cast<int>(rows_.size()); }
  int parameter_count() const { return static_cast<int>(theta_.size()); }
  const Variable& variable(int j) const { return variables_[j]; }
  const Row& row(int i) const { return rows_[i]; }
  const Eigen::VectorXd& parameters() const { return theta_; }
  double objective_constant() const { return objective_constant_; }

  // rhs + rhs_param . theta at the stored parameters.
  double effective_rhs(int i) const;
  double activity(int i, const Eigen::VectorXd& y) const;
  // Largest violation of any row or variable bound by y.
  double max_violation(const Eigen::VectorXd& y) const;
  double objective(const Eigen::VectorXd& y) const;

 private:
  std::string name_;
  std::vector<Variable> variables_;
  std::vector<Row> rows_;
  Eigen::VectorXd theta_;
  double objective_constant_ = 0.0;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kNumericFailure };
enum class Arithmetic { kDouble, kRational };

const char* lp_status_name(LpStatus s);

struct SolveOptions {
  Arithmetic arithmetic = Arithmetic::kDouble;
  // Retry a failed double solve in exact arithmetic when rows * columns is at
  // most this many entries.
  long rational_fallback_limit = 20000;
  // Programs with more rows than this start from the equality rows plus the
  // rows violated at the initial point and activate the rest on violation.
  int lazy_row_threshold = 0;
  int max_iterations = 500000;
};

// Phase-one duals at an infeasible point: pi per row and d_j = -pi . a_j per
// variable. Nonbasic columns sit at the bound selected by the sign of d_j.
struct FarkasWitness {
  Eigen::VectorXd row_multipliers;
  Eigen::VectorXd reduced_costs;
  double infeasibility = 0.0;
};

struct LpResult {
  LpStatus status = LpStatus::kNumericFailure;
  Eigen::VectorXd values;
  double objective = 0.0;
  std::optional<FarkasWitness> farkas;
  int iterations = 0;
  int active_rows = 0;
  double max_violation = 0.0;
  Arithmetic arithmetic = Arithmetic::kDouble;

  bool optimal() const { return status == LpStatus::kOptimal; }
  bool infeasible() const { return status == LpStatus::kInfeasible; }
};

LpResult solve(const LinearProgram& lp, const SolveOptions& options = {});

// Minimum of sum_j d_j y_j + sum_i pi_i s_i with every y_j and row value s_i
// in its box. Any feasible point makes that sum zero, so a positive margin
// proves infeasibility. Returns -inf when an infinite bound is selected.
double farkas_margin(const LinearProgram& lp, const FarkasWitness& w);

// Carries row multipliers from `from` to the rows of `to` with the same
// labels and recomputes the reduced costs there. Nullopt if a used row has no
// counterpart; the result still has to pass farkas_margin on `to`.
std::optional<FarkasWitness> transfer_farkas(const LinearProgram& from, const FarkasWitness& w,
                                             const LinearProgram& to);

// CPLEX-style text dump; parametric right-hand sides are printed evaluated,
// with their parameter terms in a trailing comment.
void write_lp(std::ostream& out, const LinearProgram& lp);

}  // namespace corrclust::lp
