#include "susyritus/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <thread>

#include "susyritus/errors.hpp"

namespace susyritus::numerics {

namespace {

// Kronrod 15-point abscissae (positive half) and weights; the Gauss 7-point
// rule uses every other abscissa.
constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo, hi, value, error, fmax;
  bool operator<(const Segment& o) const { return error < o.error; }
};

Segment kronrod(const RealFn& f, double lo, double hi) {
  const double c = 0.5 * (lo + hi);
  const double h = 0.5 * (hi - lo);
  const double fc = f(c);
  double k = fc * kWgk[7];
  double g = fc * kWg[3];
  double fmax = std::fabs(fc);
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double f1 = f(c - dx);
    const double f2 = f(c + dx);
    k += kWgk[j] * (f1 + f2);
    if (j % 2 == 1) g += kWg[j / 2] * (f1 + f2);
    fmax = std::max({fmax, std::fabs(f1), std::fabs(f2)});
  }
  if (!std::isfinite(k)) throw NonConvergence("integrate: non-finite integrand");
  return {lo, hi, k * h, std::fabs((k - g) * h), fmax};
}

// Pivot count of the LDL^T factorisation of T - level I, i.e. the number of
// eigenvalues of the symmetric tridiagonal T below `level`.
int sturm_count(const std::vector<double>& diag, double off, double level) {
  int count = 0;
  double d = 1.0;
  for (std::size_t i = 0; i < diag.size(); ++i) {
    const double prev = (i == 0) ? 0.0 : off * off / d;
    d = diag[i] - level - prev;
    if (d == 0.0) d = -std::numeric_limits<double>::epsilon() * (std::fabs(diag[i]) + 1.0);
    if (d < 0.0) ++count;
  }
  return count;
}

std::vector<double> fd_diagonal(const RealFn& potential, const Window& w, int n, double& off) {
  if (n < 3) throw DomainError("finite-difference Hamiltonian needs at least 3 points");
  const double h = w.width() / (n + 1);
  off = -1.0 / (h * h);
  std::vector<double> diag(n);
  for (int i = 0; i < n; ++i) diag[i] = 2.0 / (h * h) + potential(w.lo + (i + 1) * h);
  return diag;
}

}  // namespace

Window hull(const Window& a, const Window& b) { return {std::min(a.lo, b.lo), std::max(a.hi, b.hi)}; }

Grid::Grid(double x_min, double x_max, int n_points) : x_min_(x_min), x_max_(x_max), n_points_(n_points) {
  if (n_points < 16) throw DomainError("Grid needs at least 16 points");
  if (!(x_max > x_min) || !std::isfinite(x_min) || !std::isfinite(x_max)) {
    throw DomainError("Grid needs finite x_min < x_max");
  }
}

double Grid::operator[](int i) const {
  if (i == n_points_ - 1) return x_max_;
  return x_min_ + i * spacing();
}

std::vector<double> Grid::samples() const {
  std::vector<double> xs(n_points_);
  for (int i = 0; i < n_points_; ++i) xs[i] = (*this)[i];
  return xs;
}

QuadResult integrate_adaptive(const RealFn& f, const Window& w, const QuadOptions& opt) {
  if (!(w.hi > w.lo)) {
    if (w.hi == w.lo) return {};
    throw DomainError("integrate: window must satisfy lo <= hi");
  }
  std::priority_queue<Segment> heap;
  double value = 0.0;
  double error = 0.0;
  double fmax = 0.0;
  const int n0 = std::max(1, opt.initial_intervals);
  const double step = w.width() / n0;
  for (int i = 0; i < n0; ++i) {
    const double lo = w.lo + i * step;
    const double hi = (i == n0 - 1) ? w.hi : w.lo + (i + 1) * step;
    Segment s = kronrod(f, lo, hi);
    value += s.value;
    error += s.error;
    fmax = std::max(fmax, s.fmax);
    heap.push(s);
  }
  int intervals = n0;
  while (error > std::max(opt.abs_tol, opt.rel_tol * std::fabs(value))) {
    if (intervals >= opt.max_intervals) {
      throw NonConvergence("integrate: error estimate " + std::to_string(error) + " above tolerance after " +
                           std::to_string(intervals) + " intervals");
    }
    const Segment worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    const Segment left = kronrod(f, worst.lo, mid);
    const Segment right = kronrod(f, mid, worst.hi);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    fmax = std::max({fmax, left.fmax, right.fmax});
    heap.push(left);
    heap.push(right);
    ++intervals;
  }
  // Final sum over the partition in left-to-right order.
  double total = 0.0;
  double total_err = 0.0;
  std::vector<Segment> parts;
  parts.reserve(heap.size());
  while (!heap.empty()) {
    parts.push_back(heap.top());
    heap.pop();
  }
  std::sort(parts.begin(), parts.end(), [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
  for (const Segment& s : parts) {
    total += s.value;
    total_err += s.error;
  }
  if (opt.tail_fraction > 0.0) {
    const double edge = std::max(std::fabs(f(w.lo)), std::fabs(f(w.hi)));
    if (edge > opt.tail_fraction * fmax) {
      throw TailError("integrate: integrand at the window edge is " + std::to_string(edge / fmax) +
                      " of its maximum");
    }
  }
  return {total, total_err, intervals};
}

double integrate(const RealFn& f, const Window& w, double tol) {
  QuadOptions opt;
  opt.abs_tol = tol;
  return integrate_adaptive(f, w, opt).value;
}

double default_step(double x) { return 1e-3 * (1.0 + std::fabs(x)); }

namespace {

double stencil2(const RealFn& f, double x, double h, double f0, double& round_off) {
  const double fp1 = f(x + h), fm1 = f(x - h), fp2 = f(x + 2 * h), fm2 = f(x - 2 * h);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  round_off = std::max(round_off, eps * (std::fabs(fp2) + 16 * std::fabs(fp1) + 30 * std::fabs(f0) +
                                         16 * std::fabs(fm1) + std::fabs(fm2)) /
                                      (12 * h * h));
  return (-fp2 + 16 * fp1 - 30 * f0 + 16 * fm1 - fm2) / (12 * h * h);
}

double stencil1(const RealFn& f, double x, double h, double& round_off) {
  const double fp1 = f(x + h), fm1 = f(x - h), fp2 = f(x + 2 * h), fm2 = f(x - 2 * h);
  constexpr double eps = std::numeric_limits<double>::epsilon();
  round_off = std::max(round_off, eps * (std::fabs(fp2) + 8 * std::fabs(fp1) + 8 * std::fabs(fm1) +
                                         std::fabs(fm2)) /
                                      (12 * h));
  return (fm2 - 8 * fm1 + 8 * fp1 - fp2) / (12 * h);
}

// Two Richardson levels on steps h, 2h, 4h for a fourth-order stencil.
DerivativeEstimate richardson(double d1, double d2, double d4, double round_off) {
  const double r1 = (16 * d1 - d2) / 15;
  const double r2 = (16 * d2 - d4) / 15;
  const double value = (64 * r1 - r2) / 63;
  return {value, std::fabs(value - r1) + round_off};
}

}  // namespace

DerivativeEstimate second_derivative(const RealFn& f, double x, double h, double tol) {
  if (h <= 0.0) h = default_step(x);
  const double f0 = f(x);
  while (true) {
    double round_off = 0.0;
    const double d1 = stencil2(f, x, h, f0, round_off);
    const double d2 = stencil2(f, x, 2 * h, f0, round_off);
    const double d4 = stencil2(f, x, 4 * h, f0, round_off);
    const DerivativeEstimate est = richardson(d1, d2, d4, round_off);
    if (tol <= 0.0 || est.error <= tol) return est;
    h *= 0.5;
    if (h < 1e-7) {
      throw StepUnderflow("second_derivative: step fell below 1e-7 with error estimate " +
                          std::to_string(est.error));
    }
  }
}

DerivativeEstimate first_derivative(const RealFn& f, double x, double h) {
  if (h <= 0.0) h = default_step(x);
  double round_off = 0.0;
  const double d1 = stencil1(f, x, h, round_off);
  const double d2 = stencil1(f, x, 2 * h, round_off);
  const double d4 = stencil1(f, x, 4 * h, round_off);
  return richardson(d1, d2, d4, round_off);
}

int count_nodes(const std::vector<double>& samples) {
  double peak = 0.0;
  for (double v : samples) peak = std::max(peak, std::fabs(v));
  const double threshold = 1e-10 * peak;
  int nodes = 0;
  int last = 0;
  for (double v : samples) {
    if (std::fabs(v) <= threshold) continue;
    const int s = v > 0 ? 1 : -1;
    if (last != 0 && s != last) ++nodes;
    last = s;
  }
  return nodes;
}

Eigen::MatrixXd gram_matrix(const std::vector<RealFn>& functions, const Window& w, double tol) {
  const int n = static_cast<int>(functions.size());
  // Edge check: each function must have decayed inside the window.
  for (int i = 0; i < n; ++i) {
    double peak = 0.0;
    const Grid probe(w, 257);
    for (int j = 0; j < probe.size(); ++j) peak = std::max(peak, std::fabs(functions[i](probe[j])));
    const double edge = std::max(std::fabs(functions[i](w.lo)), std::fabs(functions[i](w.hi)));
    if (edge > 1e-6 * peak) {
      throw TailError("gram_matrix: function " + std::to_string(i) + " has not decayed at the window edge");
    }
  }
  Eigen::MatrixXd g(n, n);
  QuadOptions opt;
  opt.abs_tol = tol;
  opt.initial_intervals = 32;
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const RealFn& fi = functions[i];
      const RealFn& fj = functions[j];
      g(i, j) = integrate_adaptive([&](double x) { return fi(x) * fj(x); }, w, opt).value;
      g(j, i) = g(i, j);
    }
  }
  return g;
}

ResidualReport residual_report(const std::string& name, const Grid& grid, const RealFn& residual,
                               const RealFn& scale) {
  ResidualReport rep;
  rep.quantity_name = name;
  rep.grid = grid;
  for (int i = 0; i < grid.size(); ++i) {
    const double x = grid[i];
    const double r = std::fabs(residual(x));
    rep.sup_abs = std::isnan(r) ? std::numeric_limits<double>::infinity() : std::max(rep.sup_abs, r);
    rep.rel_to = std::max(rep.rel_to, std::fabs(scale(x)));
  }
  return rep;
}

std::vector<double> evaluate_on_grid(const RealFn& f, const std::vector<double>& xs, int jobs) {
  const int n = static_cast<int>(xs.size());
  std::vector<double> out(n);
  jobs = std::clamp(jobs, 1, std::max(1, n));
  if (jobs == 1) {
    for (int i = 0; i < n; ++i) out[i] = f(xs[i]);
    return out;
  }
  std::vector<std::thread> workers;
  std::vector<std::exception_ptr> errors(jobs);
  const int chunk = (n + jobs - 1) / jobs;
  for (int t = 0; t < jobs; ++t) {
    const int lo = t * chunk;
    const int hi = std::min(n, lo + chunk);
    workers.emplace_back([&, t, lo, hi] {
      try {
        for (int i = lo; i < hi; ++i) out[i] = f(xs[i]);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& w : workers) w.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

int count_eigenvalues_below(const RealFn& potential, const Window& w, int n, double level) {
  double off = 0.0;
  const std::vector<double> diag = fd_diagonal(potential, w, n, off);
  return sturm_count(diag, off, level);
}

double fd_eigenvalue(const RealFn& potential, const Window& w, int n, int k, double tol) {
  double off = 0.0;
  const std::vector<double> diag = fd_diagonal(potential, w, n, off);
  if (k < 0 || k >= n) throw IndexError("fd_eigenvalue: index out of range");
  double lo = *std::min_element(diag.begin(), diag.end()) - 2 * std::fabs(off);
  double hi = *std::max_element(diag.begin(), diag.end()) + 2 * std::fabs(off);
  while (hi - lo > tol * std::max(1.0, std::fabs(lo) + std::fabs(hi))) {
    const double mid = 0.5 * (lo + hi);
    if (sturm_count(diag, off, mid) > k) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace susyritus::numerics
