#include "fracmems/green.hpp"

#include <algorithm>
#include <cmath>

#include "fracmems/quadrature.hpp"
#include "fracmems/special.hpp"

namespace fracmems {

namespace {

constexpr double kPi = 3.14159265358979323846;

// incomplete kernel factor int_0^z t^{s-1} (1+t)^{-N/2} dt, evaluated after
// the substitution t = u^{1/s} which removes the endpoint singularity,
// with a log-scale panel for large upper limits.
double kernel_incomplete(double z, double s, int dim, double tol) {
  if (z <= 0.0) return 0.0;
  const double Z = std::pow(z, s);
  const double half_dim = 0.5 * dim;
  auto g = [&](double u) {
    return std::pow(1.0 + std::pow(u, 1.0 / s), -half_dim);
  };
  quad::Options opt;
  opt.abs_tol = tol;
  opt.rel_floor = 1e-13;
  double out = quad::adaptive(g, 0.0, std::min(1.0, Z), opt).value;
  if (Z > 1.0) {
    auto glog = [&](double v) {
      const double u = std::exp(v);
      return g(u) * u;
    };
    out += quad::adaptive(glog, 0.0, std::log(Z), opt).value;
  }
  return out / s;
}

double kernel_point(const FracParams& p, double d2, double z, double tol) {
  // d2 = |x-y|^2, z = (1-|x|^2)(1-|y|^2)/|x-y|^2
  return special::boggio_constant(p.dim, p.s) *
         std::pow(d2, 0.5 * (2.0 * p.s - p.dim)) *
         kernel_incomplete(z, p.s, p.dim, tol);
}

// angular average of the kernel between radial shells, dims 2 and 3;
// integrable (possibly unbounded) concentration near theta = 0 for r ~ rp.
double kernel_radial_avg(const FracParams& p, double r, double rp,
                         double tol) {
  const double B = 2.0 * r * rp;
  const double dd = (r - rp) * (r - rp);
  const double om = (1.0 - r * r) * (1.0 - rp * rp);
  auto f = [&](double th) {
    const double sh = std::sin(0.5 * th);
    const double d2 = dd + 2.0 * B * sh * sh;
    const double surf =
        p.dim == 3 ? 2.0 * kPi * std::sin(th) : 2.0;  // measure on S^{N-1}
    return surf * kernel_point(p, d2, om / d2, tol * 0.1);
  };
  if (B < 1e-14) {
    const double d2 = std::max(dd, 1e-300);
    return special::sphere_area(p.dim) * kernel_point(p, d2, om / d2, tol);
  }
  // the integrand concentrates at the diagonal scale; tanh-sinh handles the
  // (integrable) peak at 0 when r = rp
  const double peak =
      std::min(kPi, 4.0 * std::sqrt(std::max(dd, 1e-30) / B));
  double out = quad::tanh_sinh(f, 0.0, peak, tol * 0.5).value;
  if (peak < kPi) {
    quad::Options opt;
    opt.abs_tol = tol * 0.5;
    opt.rel_floor = 1e-12;
    out += quad::adaptive(f, peak, kPi, opt).value;
  }
  return out;
}

}  // namespace

VarrhoProfile VarrhoProfile::make(double tau, double s) {
  VarrhoProfile v;
  v.tau = tau;
  v.s = s;
  v.kind = (tau == s) ? Kind::LogCritical : Kind::PowerMin;
  return v;
}

double VarrhoProfile::operator()(double rho) const {
  const double r = std::min(rho, 0.5);
  if (kind == Kind::LogCritical) return std::pow(r, s) * std::log(1.0 / r);
  return std::pow(r, std::min(s, tau));
}

GreenOperator::GreenOperator(OperatorMatrix op)
    : op_(std::move(op)), chol_(op_.bilinear_form()) {}

std::vector<double> GreenOperator::apply(const std::vector<double>& f) const {
  const auto& w = op_.grid->cell_weights;
  std::vector<double> rhs(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) rhs[i] = w[i] * f[i];
  return chol_.solve(rhs);
}

GridFunction GreenOperator::apply(const GridFunction& f) const {
  return {op_.grid, apply(f.values)};
}

double green_kernel_1d(const FracParams& params, double x, double y,
                       double tol) {
  if (params.dim != 1)
    throw KernelUnavailable("closed-form kernel point values: dim 1 only");
  const double d2 = (x - y) * (x - y);
  if (d2 == 0.0) throw DomainError("kernel diagonal is singular");
  const double z = (1.0 - x * x) * (1.0 - y * y) / d2;
  return kernel_point(params, d2, z, tol);
}

GridFunction green_apply_kernel(const FracParams& params,
                                const GridFunction& f, double tol) {
  const auto& g = *f.grid;
  if ((g.geometry == Geometry::Interval) != (params.dim == 1))
    throw DomainError("grid geometry does not match params.dim");
  const int n = static_cast<int>(g.size());
  GridFunction out(f.grid);

  // piecewise-linear interpolant of the load: flat cap at the ball center,
  // linear drop to zero at the boundary, zero outside
  auto interp = [&](double t) {
    const auto& xs = g.nodes;
    if (t >= 1.0) return 0.0;
    if (g.geometry == Geometry::Interval) {
      if (t <= -1.0) return 0.0;
    } else if (t <= xs.front()) {
      return f.values.front();
    }
    const auto it = std::upper_bound(xs.begin(), xs.end(), t);
    const int j = static_cast<int>(it - xs.begin());
    const double xl = (j == 0) ? -1.0 : xs[j - 1];
    const double xr = (j == n) ? 1.0 : xs[j];
    const double vl = (j == 0) ? 0.0 : f.values[j - 1];
    const double vr = (j == n) ? 0.0 : f.values[j];
    const double lam = (t - xl) / (xr - xl);
    return vl + lam * (vr - vl);
  };

  for (int i = 0; i < n; ++i) {
    const double xi = g.nodes[i];
    auto integrand = [&](double t) {
      if (params.dim == 1)
        return interp(t) * green_kernel_1d(params, xi, t, tol * 0.01);
      return interp(t) * std::pow(t, params.dim - 1.0) *
             kernel_radial_avg(params, xi, t, tol * 0.05);
    };
    const double lo = params.dim == 1 ? -1.0 : 0.0;
    std::vector<double> cuts = {lo, xi, 1.0};
    for (int j = 0; j < n; j += std::max(1, n / 16))
      cuts.push_back(g.nodes[j]);  // keep panels aligned with the kink scale
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double acc = 0.0;
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (cuts[k + 1] <= cuts[k]) continue;
      // tanh-sinh tolerates the kernel singularity at t -> xi and the
      // boundary decay at the outer endpoints
      acc += quad::tanh_sinh(integrand, cuts[k], cuts[k + 1],
                             tol / (cuts.size() - 1.0))
                 .value;
    }
    out.values[i] = acc;
  }
  return out;
}

std::vector<RatioSample> green_two_sided(const GreenOperator& green,
                                         double tau) {
  const auto& op = green.op();
  const double s = op.params.s;
  if (!(tau > 0.0 && tau < 2.0 * s))
    throw DomainError("green_two_sided: tau must be in (0, 2s)");
  const auto& g = *op.grid;
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    f[i] = std::pow(g.rho(i), tau - 2.0 * s);
  const auto u = green.apply(f);
  const auto varrho = VarrhoProfile::make(tau, s);
  std::vector<RatioSample> out(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double rho = g.rho(i);
    out[i] = {rho, u[i], u[i] / varrho(rho)};
  }
  return out;
}

std::vector<RatioSample> blowup_ratio(const GreenOperator& green, double gamma,
                                      const std::vector<double>& probe_rhos) {
  const auto& op = green.op();
  const double s = op.params.s;
  if (!(gamma > 0.0 && gamma < s))
    throw DomainError("blowup_ratio: gamma must be in (0, s)");
  const auto& g = *op.grid;
  std::vector<double> f(g.size());
  for (std::size_t i = 0; i < g.size(); ++i)
    f[i] = std::pow(g.rho(i), -2.0 * gamma);
  const auto u = green.apply(f);

  std::vector<RatioSample> out;
  out.reserve(probe_rhos.size());
  for (double probe : probe_rhos) {
    int best = 0;
    double dist = 1e300;
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double d = std::fabs(g.boundary_distance(i) - probe);
      if (d < dist) {
        dist = d;
        best = static_cast<int>(i);
      }
    }
    const double rho = g.rho(best);
    out.push_back({rho, u[best], u[best] * std::pow(rho, -gamma)});
  }
  return out;
}

double fit_log_slope(const std::vector<RatioSample>& samples) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const double n = static_cast<double>(samples.size());
  for (const auto& p : samples) {
    const double lx = std::log(p.rho);
    const double ly = std::log(std::fabs(p.value));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace fracmems
