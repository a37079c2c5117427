#pragma once

#include "hmcone/ambient.hpp"

#include <functional>
#include <string>
#include <vector>

namespace hmcone {

enum class Provenance { Analytic, FiniteDifference };

/// Height function x -> f(x) of a graphical hypersurface F(x) = (x, f(x)).
struct GraphFunction {
  int dim = 0;
  std::string name;
  std::function<double(const Vec&)> eval;
  std::function<Vec(const Vec&)> grad;
  std::function<Mat(const Vec&)> hess;
  std::function<bool(const Vec&)> domain;
  Provenance provenance = Provenance::Analytic;
};

struct SecondFundamentalForm {
  Vec at;
  Mat matrix;
  Vec normal;  // ambient unit normal, n + 1 model coordinates
  double min_eigenvalue = 0.0;
};

struct ConvexityCertificate {
  bool pass = false;
  double min_eigenvalue = 0.0;
  Vec argmin_point;
  std::size_t n_samples = 0;
  double tol = 0.0;
};

/// Wraps eval with central-difference gradient and Hessian.
GraphFunction finite_difference_graph(int dim, std::string name,
                                      std::function<double(const Vec&)> eval,
                                      std::function<bool(const Vec&)> domain);

Vec fd_gradient(const std::function<double(const Vec&)>& f, const Vec& x);
Mat fd_hessian(const std::function<double(const Vec&)>& f, const Vec& x);

// Registry graph functions.
GraphFunction sphere_beyond_infinity(double q, int dim);
GraphFunction horosphere_graph(double c, int dim);
/// f(x) = c + a |x|^2.
GraphFunction paraboloid_graph(double a, int dim, double c = 0.0);
/// f(x) = log(x + 1) for x >= 0 and 0 for x < 0 (one-dimensional).
GraphFunction log_cone_graph();
/// f(x) = x sin x (one-dimensional).
GraphFunction xsinx_graph();

/// Second fundamental form of the graph in the hyperbolic upper halfspace
/// H^{n+1}, with the upward unit normal.
SecondFundamentalForm sff_hyperbolic_graph(const GraphFunction& f, const Vec& x);
/// Euclidean graph: A = Hess f / sqrt(1 + |grad f|^2), upward normal.
SecondFundamentalForm sff_euclidean_graph(const GraphFunction& f, const Vec& x);

/// Closed form 1/(2f) (Id + x x^T / (f + q)^2) for sphere_beyond_infinity(q).
Mat sphere_beyond_infinity_sff(double q, const Vec& x);

/// Ascending eigenvalues of a symmetric matrix.
Vec eigen_spectrum(const Mat& a);
inline Vec eigen_spectrum(const SecondFundamentalForm& a) { return eigen_spectrum(a.matrix); }

/// Sample-based strict convexity certificate: pass iff min eigenvalue > tol.
/// `ambient` must be Euclidean(n) or Hyperbolic(n + 1).
ConvexityCertificate certify_strict_convexity(const GraphFunction& f, const ModelSpace& ambient,
                                              const std::vector<Vec>& samples, double tol = 1e-8,
                                              bool parallel = true);

/// Regular grid over the box [lo, hi]^dim, filtered by the graph's domain.
std::vector<Vec> grid_samples(const GraphFunction& f, double lo, double hi, int per_axis);

}  // namespace hmcone
