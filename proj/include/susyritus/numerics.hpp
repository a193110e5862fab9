#pragma once

// Shared numerical services: grids, adaptive quadrature, finite-difference
// stencils, node counting, Gram matrices, residual norms and a Sturm-sequence
// eigenvalue counter for finite-difference Hamiltonians.

#include <Eigen/Dense>
#include <functional>
#include <string>
#include <vector>

namespace susyritus::numerics {

using RealFn = std::function<double(double)>;

struct Window {
  double lo = 0.0;
  double hi = 1.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
};

/// Smallest window containing both arguments.
Window hull(const Window& a, const Window& b);

/// Uniformly spaced samples including both endpoints.
class Grid {
 public:
  Grid(double x_min, double x_max, int n_points);
  Grid(const Window& w, int n_points) : Grid(w.lo, w.hi, n_points) {}

  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  int size() const { return n_points_; }
  double spacing() const { return (x_max_ - x_min_) / (n_points_ - 1); }
  double operator[](int i) const;
  std::vector<double> samples() const;
  Window window() const { return {x_min_, x_max_}; }

 private:
  double x_min_;
  double x_max_;
  int n_points_;
};

struct QuadOptions {
  double abs_tol = 1e-10;
  double rel_tol = 0.0;
  int max_intervals = 20000;
  int initial_intervals = 16;
  /// When positive, endpoint values above this fraction of max|f| raise TailError.
  double tail_fraction = -1.0;
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int intervals = 0;
};

/// Globally adaptive Gauss-Kronrod (7/15) quadrature.
QuadResult integrate_adaptive(const RealFn& f, const Window& w, const QuadOptions& opt = {});
double integrate(const RealFn& f, const Window& w, double tol = 1e-10);

struct DerivativeEstimate {
  double value = 0.0;
  double error = 0.0;
};

/// Default finite-difference step 1e-3 (1 + |x|).
double default_step(double x);

/// Five-point second derivative with two Richardson levels.  The step h is the
/// finest spacing used.  With tol > 0 the step is halved until the estimate
/// meets tol, raising StepUnderflow once h drops below 1e-7.
DerivativeEstimate second_derivative(const RealFn& f, double x, double h = 0.0, double tol = 0.0);
DerivativeEstimate first_derivative(const RealFn& f, double x, double h = 0.0);

/// Sign changes among samples above 1e-10 max|samples|.
int count_nodes(const std::vector<double>& samples);

/// Symmetric matrix of inner products over the window.
Eigen::MatrixXd gram_matrix(const std::vector<RealFn>& functions, const Window& w,
                            double tol = 1e-12);

struct ResidualReport {
  std::string quantity_name;
  double sup_abs = 0.0;
  double rel_to = 0.0;
  Grid grid{0.0, 1.0, 16};

  double relative() const { return rel_to > 0.0 ? sup_abs / rel_to : sup_abs; }
};

/// sup|residual| over the grid, relative to sup|scale|.
ResidualReport residual_report(const std::string& name, const Grid& grid, const RealFn& residual,
                               const RealFn& scale);

/// Values of f on the grid, computed by `jobs` workers over contiguous blocks.
std::vector<double> evaluate_on_grid(const RealFn& f, const std::vector<double>& xs, int jobs = 1);

/// Number of eigenvalues below `level` of -d^2/dx^2 + V on the window with
/// Dirichlet ends, second-order finite differences on n interior points.
int count_eigenvalues_below(const RealFn& potential, const Window& w, int n, double level);

/// The k-th (0-based) eigenvalue of the same discretisation, by bisection.
double fd_eigenvalue(const RealFn& potential, const Window& w, int n, int k, double tol = 1e-12);

}  // namespace susyritus::numerics
