#include "cforge/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <random>

#include <Eigen/Eigenvalues>

namespace cforge {

bool SpectralData::consistent() const {
  int zero = 0;
  for (const EigenCluster& c : clusters) {
    if (c.value > 1e-9) return false;
    if (std::abs(c.value) < kClusterGap) {
      zero = c.multiplicity;
    } else if (c.multiplicity != 4) {
      return false;
    }
  }
  return zero % 2 == 1 && 1 + 2 * p + 4 * r == dim;
}

std::vector<double> SpectralData::flattened() const {
  std::vector<double> out;
  for (const EigenCluster& c : clusters) out.insert(out.end(), static_cast<std::size_t>(c.multiplicity), c.value);
  return out;
}

std::vector<EigenCluster> cluster_eigenvalues(std::vector<double> values, double gap) {
  std::sort(values.begin(), values.end(), std::greater<>());
  std::vector<EigenCluster> out;
  std::size_t i = 0;
  while (i < values.size()) {
    std::size_t j = i + 1;
    while (j < values.size() && values[j - 1] - values[j] < gap) ++j;
    if (values[i] - values[j - 1] >= gap) {
      throw Error(ErrorCode::ClusteringAmbiguous, "eigenvalues chain across the clustering gap");
    }
    double sum = 0.0;
    for (std::size_t k = i; k < j; ++k) sum += values[k];
    out.push_back({sum / static_cast<double>(j - i), static_cast<int>(j - i)});
    i = j;
  }
  return out;
}

SpectralData spectrum_from_frame_matrix(const Eigen::MatrixXd& h, double gap) {
  const Eigen::MatrixXd h2 = h * h;
  const Eigen::MatrixXd sym = 0.5 * (h2 + h2.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym, Eigen::EigenvaluesOnly);
  std::vector<double> ev(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  SpectralData out;
  out.dim = static_cast<int>(h.rows());
  out.clusters = cluster_eigenvalues(ev, gap);
  for (const EigenCluster& c : out.clusters) {
    if (std::abs(c.value) < gap) {
      out.p = (c.multiplicity - 1) / 2;
    } else if (c.value < 0.0) {
      ++out.r;
      out.lambdas.push_back(std::sqrt(-c.value));
    }
  }
  return out;
}

Eigen::MatrixXd frame_matrix(const ManifoldDescriptor& m, const VTensor& a, const Vec& x) {
  const auto frame = orthonormal_frame(m, x);
  const auto n = static_cast<Eigen::Index>(frame.size());
  Eigen::MatrixXd out(n, n);
  for (Eigen::Index b = 0; b < n; ++b) {
    const Vec ab = a(x, frame[static_cast<std::size_t>(b)]);
    for (Eigen::Index c = 0; c < n; ++c) out(c, b) = m.inner(ab, frame[static_cast<std::size_t>(c)]);
  }
  return out;
}

SpectralData h2_spectrum(const AcmStructure& s, const Vec& x) {
  s.manifold.require_point(x);
  return spectrum_from_frame_matrix(frame_matrix(s.manifold, h_field(s), x));
}

double spectral_constancy_residual(const AcmStructure& s, const std::vector<Vec>& points) {
  if (points.empty()) return 0.0;
  const std::vector<double> ref = h2_spectrum(s, points.front()).flattened();
  double r = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    const std::vector<double> f = h2_spectrum(s, points[i]).flattened();
    if (f.size() != ref.size()) return std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < f.size(); ++k) r = std::max(r, std::abs(f[k] - ref[k]));
  }
  return r;
}

namespace {

// Eigenprojectors of h² on ξ^⊥, grouped by cluster.
std::vector<Eigen::MatrixXd> eigenprojectors(const Eigen::MatrixXd& h, const Eigen::VectorXd& xi, double gap,
                                             std::vector<double>* values = nullptr) {
  const Eigen::MatrixXd h2 = h * h;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(0.5 * (h2 + h2.transpose()));
  const Eigen::VectorXd ev = solver.eigenvalues();
  const Eigen::MatrixXd& vecs = solver.eigenvectors();
  const auto n = ev.size();
  // Ascending order from Eigen; walk descending so clusters match cluster_eigenvalues.
  std::vector<Eigen::MatrixXd> out;
  Eigen::Index i = n - 1;
  while (i >= 0) {
    Eigen::Index j = i - 1;
    while (j >= 0 && ev(j + 1) - ev(j) < gap) --j;
    Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, n);
    for (Eigen::Index k = j + 1; k <= i; ++k) p += vecs.col(k) * vecs.col(k).transpose();
    if (std::abs(ev(i)) < gap) p -= xi * xi.transpose();
    out.push_back(p);
    if (values) values->push_back(ev(i));
    i = j;
  }
  return out;
}

}  // namespace

double eigenspace_stability_residual(const Eigen::MatrixXd& phi, const Eigen::MatrixXd& h, const Eigen::VectorXd& xi,
                                     double gap) {
  const auto n = h.rows();
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  double r = 0.0;
  for (const Eigen::MatrixXd& p : eigenprojectors(h, xi, gap)) {
    r += ((id - p) * phi * p).norm() + ((id - p) * h * p).norm();
  }
  return r;
}

double eigenspace_stability_residual(const AcmStructure& s, const Vec& x) {
  s.manifold.require_point(x);
  const Eigen::MatrixXd phi = frame_matrix(s.manifold, s.phi, x);
  const Eigen::MatrixXd h = frame_matrix(s.manifold, h_field(s), x);
  const auto frame = orthonormal_frame(s.manifold, x);
  const Vec xi = s.xi(x);
  Eigen::VectorXd xc(static_cast<Eigen::Index>(frame.size()));
  for (std::size_t a = 0; a < frame.size(); ++a) xc(static_cast<Eigen::Index>(a)) = s.g(xi, frame[a]);
  return eigenspace_stability_residual(phi, h, xc);
}

double gram_orthogonality_residual(const AcmStructure& s, const Vec& x, std::uint64_t seed) {
  s.manifold.require_point(x);
  const auto frame = orthonormal_frame(s.manifold, x);
  const Eigen::MatrixXd phi = frame_matrix(s.manifold, s.phi, x);
  const Eigen::MatrixXd h = frame_matrix(s.manifold, h_field(s), x);
  const Vec xi = s.xi(x);
  const auto n = static_cast<Eigen::Index>(frame.size());
  Eigen::VectorXd xc(n);
  for (Eigen::Index a = 0; a < n; ++a) xc(a) = s.g(xi, frame[static_cast<std::size_t>(a)]);
  std::vector<double> values;
  const auto projectors = eigenprojectors(h, xc, kClusterGap, &values);
  std::size_t which = projectors.size();
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k] < -kClusterGap) {
      which = k;
      break;
    }
  }
  if (which == projectors.size()) return 0.0;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss;
  Eigen::VectorXd v(n);
  for (Eigen::Index a = 0; a < n; ++a) v(a) = gauss(rng);
  v = projectors[which] * v;
  v.normalize();
  const std::array<Eigen::VectorXd, 4> set{v, phi * v, h * v, h * (phi * v)};
  double r = 0.0;
  for (std::size_t i = 0; i < set.size(); ++i) {
    for (std::size_t j = i + 1; j < set.size(); ++j) {
      r = std::max(r, std::abs(set[i].dot(set[j])) / (set[i].norm() * set[j].norm()));
    }
  }
  return r;
}

double contact_volume(const ManifoldDescriptor& m, const STensor& eta, const Vec& x) {
  m.require_point(x);
  const auto frame = orthonormal_frame(m, x);
  const int dim = m.dim();
  if (dim % 2 == 0) throw Error(ErrorCode::InvalidArgument, "contact volume needs odd dimension");
  const auto n = static_cast<Eigen::Index>(frame.size());
  const double c = m.metric_scale;
  // dη as a matrix in frame coordinates; forms are then frozen at x.
  Eigen::MatrixXd d(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    for (Eigen::Index b = 0; b < n; ++b) {
      const std::array<Vec, 2> args{frame[static_cast<std::size_t>(a)], frame[static_cast<std::size_t>(b)]};
      d(a, b) = exterior_derivative(m, eta, x, args);
    }
  }
  auto coords = [&](const Vec& v) {
    Eigen::VectorXd out(n);
    for (Eigen::Index a = 0; a < n; ++a) out(a) = c * dot(v, frame[static_cast<std::size_t>(a)]);
    return out;
  };
  const FormAtPoint eta_x{1, [&](std::span<const Vec> v) { return eta(x, v[0]); }};
  const FormAtPoint deta_x{2, [&](std::span<const Vec> v) { return coords(v[0]).dot(d * coords(v[1])); }};
  FormAtPoint vol = eta_x;
  for (int k = 0; k < dim / 2; ++k) vol = wedge(vol, deta_x);
  return vol.eval(frame);
}

double contact_volume(const AcmStructure& s, const Vec& x) { return contact_volume(s.manifold, s.eta(), x); }

}  // namespace cforge
