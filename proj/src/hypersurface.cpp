#include "hmcone/hypersurface.hpp"

#include "hmcone/error.hpp"
#include "hmcone/kernels.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace hmcone {

namespace {

double fd_scale(const Vec& x, Eigen::Index i) { return std::max(1.0, std::abs(x(i))); }

void require_dim(const GraphFunction& f, const Vec& x) {
  if (x.size() != f.dim) {
    throw Error(ErrorCode::OutsideDomain, "point dimension does not match graph dimension");
  }
  if (f.domain && !f.domain(x)) {
    std::ostringstream os;
    os << "x = (" << x.transpose() << ") outside domain of " << f.name;
    throw Error(ErrorCode::OutsideDomain, os.str());
  }
}

double min_eig(const Mat& a) {
  if (a.rows() == 1) return a(0, 0);
  return eigen_spectrum(a)(0);
}

}  // namespace

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x) {
  const double base = std::cbrt(std::numeric_limits<double>::epsilon());
  Vec g(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double h = base * fd_scale(x, i);
    Vec xp = x, xm = x;
    xp(i) += h;
    xm(i) -= h;
    g(i) = (f(xp) - f(xm)) / (2.0 * h);
  }
  return g;
}

Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& x) {
  // Second differences balance truncation against roundoff at eps^(1/4).
  const double base = std::pow(std::numeric_limits<double>::epsilon(), 0.25);
  const Eigen::Index n = x.size();
  Mat h(n, n);
  const double f0 = f(x);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double hi = base * fd_scale(x, i);
    Vec xp = x, xm = x;
    xp(i) += hi;
    xm(i) -= hi;
    h(i, i) = (f(xp) - 2.0 * f0 + f(xm)) / (hi * hi);
    for (Eigen::Index j = i + 1; j < n; ++j) {
      const double hj = base * fd_scale(x, j);
      Vec pp = x, pm = x, mp = x, mm = x;
      pp(i) += hi; pp(j) += hj;
      pm(i) += hi; pm(j) -= hj;
      mp(i) -= hi; mp(j) += hj;
      mm(i) -= hi; mm(j) -= hj;
      h(i, j) = (f(pp) - f(pm) - f(mp) + f(mm)) / (4.0 * hi * hj);
      h(j, i) = h(i, j);
    }
  }
  return h;
}

GraphFunction finite_difference_graph(int dim, std::string name,
                                      std::function<double(const Vec&)> eval,
                                      std::function<bool(const Vec&)> domain) {
  GraphFunction g;
  g.dim = dim;
  g.name = std::move(name);
  g.eval = eval;
  g.grad = [eval](const Vec& x) { return fd_gradient(eval, x); };
  g.hess = [eval](const Vec& x) { return fd_hessian(eval, x); };
  g.domain = std::move(domain);
  g.provenance = Provenance::FiniteDifference;
  return g;
}

GraphFunction sphere_beyond_infinity(double q, int dim) {
  if (!(q > 0.0)) throw Error(ErrorCode::NonpositiveParameter, "q must be positive");
  GraphFunction g;
  g.dim = dim;
  g.name = "sphere_beyond_infinity";
  g.eval = [q](const Vec& x) { return std::sqrt(4.0 * q * q - x.squaredNorm()) - q; };
  g.grad = [q](const Vec& x) {
    const double s = std::sqrt(4.0 * q * q - x.squaredNorm());
    return Vec(-x / s);
  };
  g.hess = [q, dim](const Vec& x) {
    const double s = std::sqrt(4.0 * q * q - x.squaredNorm());
    return Mat(-Mat::Identity(dim, dim) / s - x * x.transpose() / (s * s * s));
  };
  g.domain = [q](const Vec& x) { return x.squaredNorm() < 3.0 * q * q; };
  return g;
}

GraphFunction horosphere_graph(double c, int dim) {
  if (!(c > 0.0)) throw Error(ErrorCode::NonpositiveParameter, "c must be positive");
  GraphFunction g;
  g.dim = dim;
  g.name = "horosphere";
  g.eval = [c](const Vec&) { return c; };
  g.grad = [dim](const Vec&) { return Vec(Vec::Zero(dim)); };
  g.hess = [dim](const Vec&) { return Mat(Mat::Zero(dim, dim)); };
  g.domain = [](const Vec&) { return true; };
  return g;
}

GraphFunction paraboloid_graph(double a, int dim, double c) {
  GraphFunction g;
  g.dim = dim;
  g.name = "paraboloid";
  g.eval = [a, c](const Vec& x) { return c + a * x.squaredNorm(); };
  g.grad = [a](const Vec& x) { return Vec(2.0 * a * x); };
  g.hess = [a, dim](const Vec&) { return Mat(2.0 * a * Mat::Identity(dim, dim)); };
  g.domain = [](const Vec&) { return true; };
  return g;
}

GraphFunction log_cone_graph() {
  GraphFunction g;
  g.dim = 1;
  g.name = "log_cone";
  g.eval = [](const Vec& x) { return x(0) >= 0.0 ? std::log1p(x(0)) : 0.0; };
  g.grad = [](const Vec& x) { return Vec::Constant(1, x(0) >= 0.0 ? 1.0 / (1.0 + x(0)) : 0.0).eval(); };
  g.hess = [](const Vec& x) {
    const double v = x(0) >= 0.0 ? -1.0 / ((1.0 + x(0)) * (1.0 + x(0))) : 0.0;
    return Mat::Constant(1, 1, v).eval();
  };
  g.domain = [](const Vec&) { return true; };
  return g;
}

GraphFunction xsinx_graph() {
  GraphFunction g;
  g.dim = 1;
  g.name = "xsinx";
  g.eval = [](const Vec& x) { return x(0) * std::sin(x(0)); };
  g.grad = [](const Vec& x) {
    return Vec::Constant(1, std::sin(x(0)) + x(0) * std::cos(x(0))).eval();
  };
  g.hess = [](const Vec& x) {
    return Mat::Constant(1, 1, 2.0 * std::cos(x(0)) - x(0) * std::sin(x(0))).eval();
  };
  g.domain = [](const Vec&) { return true; };
  return g;
}

SecondFundamentalForm sff_hyperbolic_graph(const GraphFunction& f, const Vec& x) {
  require_dim(f, x);
  const double height = f.eval(x);
  if (!(height > 0.0)) {
    std::ostringstream os;
    os << "f(x) = " << height << " at x = (" << x.transpose() << ")";
    throw Error(ErrorCode::NonpositiveHeight, os.str());
  }
  const Vec g = f.grad(x);
  const Mat h = f.hess(x);
  const int n = f.dim;
  const double root = std::sqrt(1.0 + g.squaredNorm());

  SecondFundamentalForm out;
  out.at = x;
  Mat a = (Mat::Identity(n, n) + g * g.transpose() + height * h) / (height * height * root);
  out.matrix = 0.5 * (a + a.transpose());
  out.normal.resize(n + 1);
  out.normal.head(n) = -g;
  out.normal(n) = 1.0;
  out.normal *= height / root;
  out.min_eigenvalue = min_eig(out.matrix);
  return out;
}

SecondFundamentalForm sff_euclidean_graph(const GraphFunction& f, const Vec& x) {
  require_dim(f, x);
  const Vec g = f.grad(x);
  const Mat h = f.hess(x);
  const int n = f.dim;
  const double root = std::sqrt(1.0 + g.squaredNorm());

  SecondFundamentalForm out;
  out.at = x;
  Mat a = h / root;
  out.matrix = 0.5 * (a + a.transpose());
  out.normal.resize(n + 1);
  out.normal.head(n) = -g;
  out.normal(n) = 1.0;
  out.normal /= root;
  out.min_eigenvalue = min_eig(out.matrix);
  return out;
}

Mat sphere_beyond_infinity_sff(double q, const Vec& x) {
  const Eigen::Index n = x.size();
  const double f = std::sqrt(4.0 * q * q - x.squaredNorm()) - q;
  const double s = f + q;
  return (Mat::Identity(n, n) + x * x.transpose() / (s * s)) / (2.0 * f);
}

Vec eigen_spectrum(const Mat& a) {
  Eigen::SelfAdjointEigenSolver<Mat> solver(a, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

ConvexityCertificate certify_strict_convexity(const GraphFunction& f, const ModelSpace& ambient,
                                              const std::vector<Vec>& samples, double tol,
                                              bool parallel) {
  if (samples.empty()) throw Error(ErrorCode::EmptySampleSet, "no samples to certify");
  bool hyperbolic = false;
  if (ambient.kind() == SpaceKind::Hyperbolic && ambient.dim() == f.dim + 1) {
    hyperbolic = true;
  } else if (!(ambient.kind() == SpaceKind::Euclidean && ambient.dim() == f.dim + 1) &&
             !(ambient.kind() == SpaceKind::Euclidean && ambient.dim() == f.dim)) {
    throw Error(ErrorCode::ConfigError,
                "graph certification needs Euclidean or Hyperbolic ambient of dimension n + 1");
  }
  const auto best = kernels::min_reduce(parallel, samples.size(), [&](std::size_t i) {
    return hyperbolic ? sff_hyperbolic_graph(f, samples[i]).min_eigenvalue
                      : sff_euclidean_graph(f, samples[i]).min_eigenvalue;
  });
  ConvexityCertificate cert;
  cert.min_eigenvalue = best.value;
  cert.argmin_point = samples[best.index];
  cert.n_samples = samples.size();
  cert.tol = tol;
  cert.pass = best.value > tol;
  return cert;
}

std::vector<Vec> grid_samples(const GraphFunction& f, double lo, double hi, int per_axis) {
  std::vector<Vec> out;
  const int n = f.dim;
  std::size_t total = 1;
  for (int i = 0; i < n; ++i) total *= static_cast<std::size_t>(per_axis);
  const double step = per_axis > 1 ? (hi - lo) / (per_axis - 1) : 0.0;
  for (std::size_t k = 0; k < total; ++k) {
    Vec x(n);
    std::size_t rest = k;
    for (int i = 0; i < n; ++i) {
      x(i) = lo + step * static_cast<double>(rest % per_axis);
      rest /= per_axis;
    }
    if (!f.domain || f.domain(x)) out.push_back(std::move(x));
  }
  return out;
}

}  // namespace hmcone
