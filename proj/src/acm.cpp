#include "cforge/acm.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <memory>

namespace cforge {

const char* to_string(Mode mode) {
  switch (mode) {
    case Mode::Unset: return "unset";
    case Mode::NearlySasakian: return "nearly-sasakian";
    case Mode::NearlyCosymplectic: return "nearly-cosymplectic";
    case Mode::Sasakian: return "sasakian-candidate";
  }
  return "unknown";
}

STensor AcmStructure::eta() const {
  return STensor(1, [m = manifold, xi = xi](const auto& x, auto args) { return m.inner(xi(x), args[0]); });
}

STensor AcmStructure::fundamental_form() const {
  return STensor(2, [m = manifold, phi = phi](const auto& x, auto args) {
    return m.inner(args[0], phi(x, args[1]));
  });
}

VTensor nabla_phi_field(const AcmStructure& s) { return nabla(s.levi_civita(), s.phi); }

VTensor nabla_xi_field(const AcmStructure& s) { return nabla(s.levi_civita(), s.xi); }

VTensor h_field(const AcmStructure& s) {
  switch (s.mode) {
    case Mode::Unset:
      throw Error(ErrorCode::ModeUnset, "h needs the structure mode");
    case Mode::NearlyCosymplectic:
      return nabla_xi_field(s);
    case Mode::NearlySasakian:
    case Mode::Sasakian:
      return nabla_xi_field(s) + s.phi;
  }
  throw Error(ErrorCode::ModeUnset, "h needs the structure mode");
}

Mat7 endomorphism_matrix(const ManifoldDescriptor& m, const VTensor& a, const Vec& x) {
  // A = Σ_i A(e_i) ⊗ g(e_i, ·) for a g-orthonormal frame.
  Mat7 out = Mat7::Zero();
  for (const Vec& e : orthonormal_frame(m, x)) {
    out += to_eigen(a(x, e)) * (m.metric_scale * to_eigen(e)).transpose();
  }
  return out;
}

HTensor compute_h(const AcmStructure& s, const Vec& x) {
  s.manifold.require_point(x);
  return {endomorphism_matrix(s.manifold, h_field(s), x), s.mode};
}

double AcmResiduals::max() const { return std::max({phi_squared, eta_xi, compatible, phi_xi, eta_phi}); }

std::vector<Vec> test_frame(const AcmStructure& s, const Vec& x) { return orthonormal_frame(s.manifold, x); }

AcmResiduals acm_residuals(const AcmStructure& s, const Vec& x) {
  s.manifold.require_point(x);
  const auto frame = test_frame(s, x);
  const Vec xi = s.xi(x);
  auto eta = [&](const Vec& v) { return s.g(xi, v); };
  AcmResiduals r;
  r.eta_xi = std::abs(eta(xi) - 1.0);
  r.phi_xi = max_abs(s.phi(x, xi));
  for (const Vec& u : frame) {
    const Vec pu = s.phi(x, u);
    r.phi_squared = std::max(r.phi_squared, max_abs(s.phi(x, pu) + u - eta(u) * xi));
    r.eta_phi = std::max(r.eta_phi, std::abs(eta(pu)));
    for (const Vec& v : frame) {
      const double c = s.g(pu, s.phi(x, v)) - s.g(u, v) + eta(u) * eta(v);
      r.compatible = std::max(r.compatible, std::abs(c));
    }
  }
  return r;
}

Vec nearly_alpha_sasakian_defect(const AcmStructure& s, double alpha, const Vec& x, const Vec& u, const Vec& v) {
  const VTensor nphi = nabla_phi_field(s);
  const Vec xi = s.xi(x);
  const Vec rhs = 2.0 * s.g(u, v) * xi - s.g(xi, u) * v - s.g(xi, v) * u;
  return nphi(x, u, v) + nphi(x, v, u) - alpha * rhs;
}

Vec nearly_sasakian_defect(const AcmStructure& s, const Vec& x, const Vec& u, const Vec& v) {
  return nearly_alpha_sasakian_defect(s, 1.0, x, u, v);
}

Vec nearly_cosymplectic_defect(const AcmStructure& s, const Vec& x, const Vec& u, const Vec& v) {
  return nearly_alpha_sasakian_defect(s, 0.0, x, u, v);
}

Vec nijenhuis(const AcmStructure& s, const Vec& x, const Vec& u, const Vec& v) {
  const VTensor nphi = nabla_phi_field(s);
  const VTensor nxi = nabla_xi_field(s);
  const Vec xi = s.xi(x);
  const Vec pu = s.phi(x, u);
  const Vec pv = s.phi(x, v);
  return nphi(x, pu, v) - nphi(x, pv, u) + nphi(x, u, pv) - nphi(x, v, pu) + s.g(xi, u) * nxi(x, v) -
         s.g(xi, v) * nxi(x, u);
}

Vec lie_derivative_phi(const AcmStructure& s, const Vec& x, const Vec& u) {
  const ManifoldDescriptor& m = s.manifold;
  const VTensor uf = constant_field(m, u);
  const VTensor phi_u = contract(s.phi, {uf});
  return lie_bracket(m, s.xi, phi_u)(x) - s.phi(x, lie_bracket(m, s.xi, uf)(x));
}

namespace {

// Shared derived fields for one structure, built once per suite.
struct Derived {
  AcmStructure s;
  VTensor nphi;
  VTensor nxi;
  STensor Phi;
  VTensor h;
  VTensor nh;
  VTensor nh2;
  VTensor nphih;
  VTensor phih;

  explicit Derived(const AcmStructure& st) : s(st) {
    nphi = nabla_phi_field(s);
    nxi = nabla_xi_field(s);
    Phi = s.fundamental_form();
    if (s.mode != Mode::Unset) {
      const Connection lc = s.levi_civita();
      h = h_field(s);
      nh = nabla(lc, h);
      nh2 = nabla(lc, compose(h, h));
      phih = compose(s.phi, h);
      nphih = nabla(lc, phih);
    }
  }
};

using DerivedPtr = std::shared_ptr<const Derived>;

// Evaluation context at one point.
struct At {
  const Derived& d;
  Vec x;
  std::vector<Vec> frame;
  Vec xi;

  At(const Derived& dd, const Vec& p) : d(dd), x(p), frame(test_frame(dd.s, p)), xi(dd.s.xi(p)) {}

  double g(const Vec& u, const Vec& v) const { return d.s.g(u, v); }
  double eta(const Vec& u) const { return g(xi, u); }
  Vec phi(const Vec& u) const { return d.s.phi(x, u); }
  Vec h(const Vec& u) const { return d.h(x, u); }
  Vec h2(const Vec& u) const { return h(h(u)); }
  Vec nphi(const Vec& u, const Vec& v) const { return d.nphi(x, u, v); }
  Vec nh(const Vec& u, const Vec& v) const { return d.nh(x, u, v); }
  double trace_h2() const {
    double t = 0.0;
    for (const Vec& e : frame) t += g(h2(e), e);
    return t;
  }
};

template <class F>
double over_pairs(const At& a, F f) {
  double r = 0.0;
  for (const Vec& u : a.frame) {
    for (const Vec& v : a.frame) r = std::max(r, f(u, v));
  }
  return r;
}

template <class F>
double over_triples(const At& a, F f) {
  double r = 0.0;
  for (const Vec& u : a.frame) {
    for (const Vec& v : a.frame) {
      for (const Vec& w : a.frame) r = std::max(r, f(u, v, w));
    }
  }
  return r;
}

template <class F>
double over_vectors(const At& a, F f) {
  double r = 0.0;
  for (const Vec& u : a.frame) r = std::max(r, f(u));
  return r;
}

// Frame vectors plus normalized pairwise sums, for quadratic (non-polarized) checks.
std::vector<Vec> quadratic_probes(const At& a) {
  std::vector<Vec> out = a.frame;
  for (std::size_t i = 0; i < a.frame.size(); ++i) {
    for (std::size_t j = i + 1; j < a.frame.size(); ++j) {
      out.push_back((a.frame[i] + a.frame[j]) / std::sqrt(2.0));
    }
  }
  return out;
}

PointCheck make(DerivedPtr d, std::string name, std::string formula, std::function<double(const At&)> f) {
  return {std::move(name), std::move(formula), [d, f = std::move(f)](const Vec& x) {
            d->s.manifold.require_point(x);
            return f(At(*d, x));
          }};
}

std::vector<PointCheck> defect_checks(DerivedPtr d, double alpha, const std::string& prefix) {
  std::vector<PointCheck> out;
  const bool ns = alpha != 0.0;
  out.push_back(make(d, prefix + "_defect",
                     ns ? "(∇_Xφ)Y + (∇_Yφ)X = 2g(X,Y)ξ − η(X)Y − η(Y)X" : "(∇_Xφ)Y + (∇_Yφ)X = 0",
                     [d, alpha](const At& a) {
                       return over_pairs(a, [&](const Vec& u, const Vec& v) {
                         const Vec rhs = 2.0 * a.g(u, v) * a.xi - a.eta(u) * v - a.eta(v) * u;
                         return max_abs(a.nphi(u, v) + a.nphi(v, u) - alpha * rhs);
                       });
                     }));
  out.push_back(make(d, prefix + "_diagonal",
                     ns ? "(∇_Xφ)X = g(X,X)ξ − η(X)X" : "(∇_Xφ)X = 0", [alpha](const At& a) {
                       double r = 0.0;
                       for (const Vec& u : quadratic_probes(a)) {
                         const Vec rhs = a.g(u, u) * a.xi - a.eta(u) * u;
                         r = std::max(r, max_abs(a.nphi(u, u) - alpha * rhs));
                       }
                       return r;
                     }));
  out.push_back(make(d, prefix + "_dphi_identity",
                     ns ? "3g((∇_Xφ)Y,Z) = −dΦ(X,Y,Z) − 3η(Y)g(X,Z) + 3η(Z)g(X,Y)"
                        : "3g((∇_Xφ)Y,Z) = −dΦ(X,Y,Z)",
                     [d, alpha](const At& a) {
                       return over_triples(a, [&](const Vec& u, const Vec& v, const Vec& w) {
                         const std::array<Vec, 3> args{u, v, w};
                         const double dPhi = exterior_derivative(d->s.manifold, d->Phi, a.x, args);
                         const double lhs = 3.0 * a.g(a.nphi(u, v), w);
                         const double rhs =
                             -dPhi - alpha * (3.0 * a.eta(v) * a.g(u, w) - 3.0 * a.eta(w) * a.g(u, v));
                         return std::abs(lhs - rhs);
                       });
                     }));
  return out;
}

// Ricci bilinear form as an ambient matrix: Ric(u,v) = uᵀ M v.
Mat7 ricci_ambient(const At& a) {
  const ManifoldDescriptor& m = a.d.s.manifold;
  const auto ric = ricci_matrix(m, a.x);
  const double c = m.metric_scale;
  Mat7 out = Mat7::Zero();
  for (std::size_t i = 0; i < a.frame.size(); ++i) {
    for (std::size_t j = 0; j < a.frame.size(); ++j) {
      out += ric[i][j] * (c * to_eigen(a.frame[i])) * (c * to_eigen(a.frame[j])).transpose();
    }
  }
  return out;
}

std::vector<PointCheck> shared_consequences(DerivedPtr d, bool ns) {
  std::vector<PointCheck> out;
  out.push_back(make(d, "nabla_xi_phi", "∇_ξφ = φh", [](const At& a) {
    return over_vectors(a, [&](const Vec& u) { return max_abs(a.nphi(a.xi, u) - a.phi(a.h(u))); });
  }));
  out.push_back(make(d, "lie_xi_phi", "L_ξφ = 3φh", [d](const At& a) {
    return over_vectors(a, [&](const Vec& u) { return max_abs(lie_derivative_phi(d->s, a.x, u) - 3.0 * a.phi(a.h(u))); });
  }));
  if (ns) {
    out.push_back(make(d, "nabla_xi_h", "∇_ξh = φh", [](const At& a) {
      return over_vectors(a, [&](const Vec& u) { return max_abs(a.nh(a.xi, u) - a.phi(a.h(u))); });
    }));
    out.push_back(make(d, "curvature_xi_covariant", "R(ξ,X)Y = (∇_Xφ)Y − (∇_Xh)Y", [d](const At& a) {
      return over_pairs(a, [&](const Vec& u, const Vec& v) {
        const Vec r = riemann(d->s.manifold, a.x, a.xi, u, v);
        return max_abs(r - a.nphi(u, v) + a.nh(u, v));
      });
    }));
    out.push_back(make(d, "curvature_xi_closed", "R(ξ,X)Y = g(X − h²X, Y)ξ − η(Y)(X − h²X)", [d](const At& a) {
      return over_pairs(a, [&](const Vec& u, const Vec& v) {
        const Vec r = riemann(d->s.manifold, a.x, a.xi, u, v);
        const Vec w = u - a.h2(u);
        return max_abs(r - a.g(w, v) * a.xi + a.eta(v) * w);
      });
    }));
    out.push_back(make(d, "curvature_to_xi", "R(X,Y)ξ = η(Y)X − η(X)Y − η(Y)h²X + η(X)h²Y", [d](const At& a) {
      return over_pairs(a, [&](const Vec& u, const Vec& v) {
        const Vec r = riemann(d->s.manifold, a.x, u, v, a.xi);
        const Vec rhs = a.eta(v) * u - a.eta(u) * v - a.eta(v) * a.h2(u) + a.eta(u) * a.h2(v);
        return max_abs(r - rhs);
      });
    }));
    out.push_back(make(d, "xi_sectional", "K(ξ,X) = 1 + g(hX,hX) for unit X ⊥ ξ", [d](const At& a) {
      double r = 0.0;
      for (const Vec& e : quadratic_probes(a)) {
        Vec u = e - a.eta(e) * a.xi;
        const double n2 = a.g(u, u);
        if (n2 < 1e-8) continue;
        u = u / std::sqrt(n2);
        const double k = sectional(d->s.manifold, a.x, a.xi, u);
        const Vec hu = a.h(u);
        r = std::max(r, std::abs(k - 1.0 - a.g(hu, hu)));
      }
      return r;
    }));
    out.push_back(make(d, "ricci_phi", "Ric(φX,φY) = Ric(X,Y) − (2n − tr h²)η(X)η(Y)", [](const At& a) {
      const Mat7 ric = ricci_ambient(a);
      const double two_n = static_cast<double>(a.frame.size() - 1);
      const double tr = a.trace_h2();
      return over_pairs(a, [&](const Vec& u, const Vec& v) {
        const double lhs = to_eigen(a.phi(u)).dot(ric * to_eigen(a.phi(v)));
        const double rhs = to_eigen(u).dot(ric * to_eigen(v)) - (two_n - tr) * a.eta(u) * a.eta(v);
        return std::abs(lhs - rhs);
      });
    }));
    out.push_back(make(d, "ricci_commutes_phi", "Ric♯∘φ = φ∘Ric♯", [](const At& a) {
      const Mat7 ric = ricci_ambient(a);
      // Ric(φX,Y) + Ric(X,φY) = 0 is the bilinear form of [Ric♯, φ] = 0.
      return over_pairs(a, [&](const Vec& u, const Vec& v) {
        return std::abs(to_eigen(a.phi(u)).dot(ric * to_eigen(v)) + to_eigen(u).dot(ric * to_eigen(a.phi(v))));
      });
    }));
    out.push_back(make(d, "nabla_phi_against_h", "g((∇_Xφ)Y, hZ) = η(Y)g(h²X,φZ) − η(X)g(h²Y,φZ) + η(Y)g(hX,Z)",
                       [](const At& a) {
                         return over_triples(a, [&](const Vec& u, const Vec& v, const Vec& w) {
                           const double lhs = a.g(a.nphi(u, v), a.h(w));
                           const double rhs = a.eta(v) * a.g(a.h2(u), a.phi(w)) -
                                              a.eta(u) * a.g(a.h2(v), a.phi(w)) + a.eta(v) * a.g(a.h(u), w);
                           return std::abs(lhs - rhs);
                         });
                       }));
    out.push_back(make(d, "nabla_h2", "(∇_Xh²)Y = η(Y)(φ−h)h²X + g((φ−h)h²X, Y)ξ", [d](const At& a) {
      return over_pairs(a, [&](const Vec& u, const Vec& v) {
        const Vec h2u = a.h2(u);
        const Vec w = a.phi(h2u) - a.h(h2u);
        return max_abs(d->nh2(a.x, u, v) - a.eta(v) * w - a.g(w, v) * a.xi);
      });
    }));
  } else {
    out.push_back(make(d, "nabla_phi_against_h", "g((∇_Xφ)Y, hZ) = η(Y)g(h²X,φZ) − η(X)g(h²Y,φZ)",
                       [](const At& a) {
                         return over_triples(a, [&](const Vec& u, const Vec& v, const Vec& w) {
                           const double lhs = a.g(a.nphi(u, v), a.h(w));
                           const double rhs =
                               a.eta(v) * a.g(a.h2(u), a.phi(w)) - a.eta(u) * a.g(a.h2(v), a.phi(w));
                           return std::abs(lhs - rhs);
                         });
                       }));
    out.push_back(make(d, "nabla_h_closed", "(∇_Xh)Y = g(h²X,Y)ξ − η(Y)h²X", [](const At& a) {
      return over_pairs(a, [&](const Vec& u, const Vec& v) {
        const Vec h2u = a.h2(u);
        return max_abs(a.nh(u, v) - a.g(h2u, v) * a.xi + a.eta(v) * h2u);
      });
    }));
  }
  return out;
}

// Closed forms valid in dimension 5, with λ² = −tr(h²)/4.
std::vector<PointCheck> dimension_five(DerivedPtr d, bool ns) {
  std::vector<PointCheck> out;
  auto lambda2 = [](const At& a) { return -a.trace_h2() / 4.0; };
  if (ns) {
    out.push_back(make(d, "nabla_phi_closed", "(∇_Xφ)Y = η(X)φhY − η(Y)(X + φhX) + g(X + φhX, Y)ξ",
                       [](const At& a) {
                         return over_pairs(a, [&](const Vec& u, const Vec& v) {
                           const Vec w = u + a.phi(a.h(u));
                           const Vec rhs = a.eta(u) * a.phi(a.h(v)) - a.eta(v) * w + a.g(w, v) * a.xi;
                           return max_abs(a.nphi(u, v) - rhs);
                         });
                       }));
    out.push_back(make(d, "nabla_h_closed", "(∇_Xh)Y = η(X)φhY − η(Y)(h²X + φhX) + g(h²X + φhX, Y)ξ",
                       [](const At& a) {
                         return over_pairs(a, [&](const Vec& u, const Vec& v) {
                           const Vec w = a.h2(u) + a.phi(a.h(u));
                           const Vec rhs = a.eta(u) * a.phi(a.h(v)) - a.eta(v) * w + a.g(w, v) * a.xi;
                           return max_abs(a.nh(u, v) - rhs);
                         });
                       }));
    out.push_back(make(d, "nabla_phih_closed",
                       "(∇_Xφh)Y = g(φh²X − hX, Y)ξ + η(X)(φh²Y − hY) − η(Y)(φh²X − hX)",
                       [d](const At& a) {
                         return over_pairs(a, [&](const Vec& u, const Vec& v) {
                           const Vec wu = a.phi(a.h2(u)) - a.h(u);
                           const Vec wv = a.phi(a.h2(v)) - a.h(v);
                           const Vec rhs = a.g(wu, v) * a.xi + a.eta(u) * wv - a.eta(v) * wu;
                           return max_abs(d->nphih(a.x, u, v) - rhs);
                         });
                       }));
    out.push_back(make(d, "nabla_h_symmetric", "(∇_Xh)Y + (∇_Yh)X = −λ²(2g(X,Y)ξ − η(X)Y − η(Y)X)",
                       [lambda2](const At& a) {
                         const double l2 = lambda2(a);
                         return over_pairs(a, [&](const Vec& u, const Vec& v) {
                           const Vec rhs = -l2 * (2.0 * a.g(u, v) * a.xi - a.eta(u) * v - a.eta(v) * u);
                           return max_abs(a.nh(u, v) + a.nh(v, u) - rhs);
                         });
                       }));
    out.push_back(make(d, "nabla_phih_symmetric", "(∇_Xφh)Y + (∇_Yφh)X = 0", [d](const At& a) {
      return over_pairs(a, [&](const Vec& u, const Vec& v) {
        return max_abs(d->nphih(a.x, u, v) + d->nphih(a.x, v, u));
      });
    }));
  }
  out.push_back(make(d, "h2_spectrum_form", "h² = −λ²(I − η⊗ξ)", [lambda2](const At& a) {
    const double l2 = lambda2(a);
    return over_vectors(a, [&](const Vec& u) { return max_abs(a.h2(u) + l2 * (u - a.eta(u) * a.xi)); });
  }));
  return out;
}

void append(std::vector<PointCheck>& out, std::vector<PointCheck> more) {
  for (auto& c : more) out.push_back(std::move(c));
}

}  // namespace

std::vector<PointCheck> nearly_sasakian_defect_checks(const AcmStructure& s) {
  return defect_checks(std::make_shared<const Derived>(s), 1.0, "ns");
}

std::vector<PointCheck> nearly_cosymplectic_defect_checks(const AcmStructure& s) {
  return defect_checks(std::make_shared<const Derived>(s), 0.0, "nc");
}

std::vector<PointCheck> reeb_checks(const AcmStructure& s) {
  auto d = std::make_shared<const Derived>(s);
  std::vector<PointCheck> out;
  out.push_back(make(d, "xi_killing", "g(∇_Xξ,Y) + g(X,∇_Yξ) = 0", [d](const At& a) {
    return over_pairs(a, [&](const Vec& u, const Vec& v) {
      return std::abs(a.g(d->nxi(a.x, u), v) + a.g(u, d->nxi(a.x, v)));
    });
  }));
  out.push_back(make(d, "xi_geodesic", "∇_ξξ = 0", [d](const At& a) { return max_abs(d->nxi(a.x, a.xi)); }));
  out.push_back(make(d, "nabla_xi_eta", "∇_ξη = 0", [d](const At& a) {
    const STensor neta = nabla(d->s.levi_civita(), d->s.eta());
    return over_vectors(a, [&](const Vec& u) { return std::abs(neta(a.x, a.xi, u)); });
  }));
  return out;
}

std::vector<PointCheck> h_algebra_checks(const AcmStructure& s) {
  auto d = std::make_shared<const Derived>(s);
  if (s.mode == Mode::Unset) throw Error(ErrorCode::ModeUnset, "h needs the structure mode");
  std::vector<PointCheck> out;
  out.push_back(make(d, "h_skew", "g(hX,Y) + g(X,hY) = 0", [](const At& a) {
    return over_pairs(a, [&](const Vec& u, const Vec& v) { return std::abs(a.g(a.h(u), v) + a.g(u, a.h(v))); });
  }));
  out.push_back(make(d, "h_anticommutes_phi", "hφ + φh = 0", [](const At& a) {
    return over_vectors(a, [&](const Vec& u) { return max_abs(a.h(a.phi(u)) + a.phi(a.h(u))); });
  }));
  out.push_back(make(d, "h_xi", "hξ = 0", [](const At& a) { return max_abs(a.h(a.xi)); }));
  out.push_back(make(d, "eta_h", "η∘h = 0", [](const At& a) {
    return over_vectors(a, [&](const Vec& u) { return std::abs(a.eta(a.h(u))); });
  }));
  return out;
}

std::vector<PointCheck> identity_suite(const AcmStructure& s) {
  if (s.mode == Mode::Unset) throw Error(ErrorCode::ModeUnset, "identity suite needs the structure mode");
  auto d = std::make_shared<const Derived>(s);
  const bool ns = s.mode != Mode::NearlyCosymplectic;
  std::vector<PointCheck> out = ns ? defect_checks(d, 1.0, "ns") : defect_checks(d, 0.0, "nc");
  append(out, h_algebra_checks(s));
  append(out, shared_consequences(d, ns));
  if (s.manifold.dim() == 5) append(out, dimension_five(d, ns));
  return out;
}

std::vector<NamedResidual> identity_residuals(const AcmStructure& s, const Vec& x) {
  std::vector<NamedResidual> out;
  for (const auto& c : identity_suite(s)) out.push_back({c.name, c.eval(x)});
  return out;
}

}  // namespace cforge
