#include "ddclock/master_oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <cstring>
#include <ostream>
#include <sstream>
#include <type_traits>

#include "ddclock/errors.hpp"
#include "ode.hpp"

namespace ddclock {

namespace {

void check_atoms(int n) {
  if (n < 1) throw DomainError("oracle needs at least one atom");
  if (n > kMaxOracleAtoms) throw CapacityError("oracle is limited to 8 atoms");
}

// M = H - (i/2) sum_ij Gamma_ij s_i^+ s_j^-, as a list of (i, j, m_ij).
struct Term {
  int i;
  int j;
  cplx m;
};

std::vector<Term> effective_terms(const Generators& gen) {
  std::vector<Term> terms;
  for (int i = 0; i < gen.atoms; ++i)
    for (int j = 0; j < gen.atoms; ++j) {
      const double om = i == j ? 0.0 : gen.omega(i, j);
      const cplx m{om, -0.5 * gen.gamma(i, j)};
      if (m != cplx{}) terms.push_back({i, j, m});
    }
  return terms;
}

void apply_rhs(const cplx* rho, cplx* out, std::size_t dim, const std::vector<Term>& terms,
               const Eigen::MatrixXd& gamma, int atoms) {
  // X = M rho
  std::vector<cplx> x(dim * dim, cplx{});
  for (std::size_t c = 0; c < dim; ++c) {
    for (const auto& t : terms) {
      const std::size_t bj = std::size_t{1} << t.j;
      const std::size_t bi = std::size_t{1} << t.i;
      if (!(c & bj)) continue;
      const std::size_t lowered = c & ~bj;
      if (lowered & bi) continue;
      const std::size_t a = lowered | bi;
      const cplx* src = rho + c * dim;
      cplx* dst = x.data() + a * dim;
      for (std::size_t b = 0; b < dim; ++b) dst[b] += t.m * src[b];
    }
  }
  // -i (X - X^dagger) + sum_ij Gamma_ij s_i^- rho s_j^+
  const cplx minus_i{0.0, -1.0};
  for (std::size_t a = 0; a < dim; ++a) {
    for (std::size_t b = 0; b < dim; ++b) {
      cplx v = minus_i * (x[a * dim + b] - std::conj(x[b * dim + a]));
      for (int i = 0; i < atoms; ++i) {
        const std::size_t bi = std::size_t{1} << i;
        if (a & bi) continue;
        for (int j = 0; j < atoms; ++j) {
          const std::size_t bj = std::size_t{1} << j;
          if (b & bj) continue;
          v += gamma(i, j) * rho[(a | bi) * dim + (b | bj)];
        }
      }
      out[a * dim + b] = v;
    }
  }
}

}  // namespace

DensityMatrix::DensityMatrix(int atoms) : atoms_(atoms), dim_(0) {
  check_atoms(atoms);
  dim_ = std::size_t{1} << atoms;
  data_.assign(dim_ * dim_, cplx{});
  data_[0] = 1.0;
}

DensityMatrix DensityMatrix::product(const BlochState& atoms) {
  DensityMatrix rho(static_cast<int>(atoms.size()));
  std::vector<std::array<cplx, 4>> local;  // (gg, ge, eg, ee)
  for (const auto& s : atoms) {
    check_bloch(s);
    const cplx ge{0.5 * s.x, 0.5 * s.y};
    local.push_back({cplx{0.5 * (1.0 - s.z)}, ge, std::conj(ge), cplx{0.5 * (1.0 + s.z)}});
  }
  for (std::size_t a = 0; a < rho.dim_; ++a)
    for (std::size_t b = 0; b < rho.dim_; ++b) {
      cplx v{1.0};
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        const int ea = (a >> k) & 1;
        const int eb = (b >> k) & 1;
        v *= local[k][2 * ea + eb];
      }
      rho(a, b) = v;
    }
  return rho;
}

DensityMatrix DensityMatrix::maximally_mixed(int atoms) {
  DensityMatrix rho(atoms);
  rho.data_[0] = 0.0;
  for (std::size_t a = 0; a < rho.dim_; ++a) rho(a, a) = 1.0 / static_cast<double>(rho.dim_);
  return rho;
}

double DensityMatrix::trace_error() const {
  cplx tr{};
  for (std::size_t a = 0; a < dim_; ++a) tr += (*this)(a, a);
  return std::abs(tr - 1.0);
}

double DensityMatrix::hermiticity_error() const {
  double err = 0.0;
  for (std::size_t a = 0; a < dim_; ++a)
    for (std::size_t b = a; b < dim_; ++b) err = std::max(err, std::abs((*this)(a, b) - std::conj((*this)(b, a))));
  return err;
}

double DensityMatrix::min_eigenvalue() const {
  Eigen::MatrixXcd m(dim_, dim_);
  for (std::size_t a = 0; a < dim_; ++a)
    for (std::size_t b = 0; b < dim_; ++b) m(a, b) = 0.5 * ((*this)(a, b) + std::conj((*this)(b, a)));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Generators make_generators(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& gamma) {
  const auto n = static_cast<int>(omega.rows());
  check_atoms(n);
  if (omega.cols() != n || gamma.rows() != n || gamma.cols() != n) {
    throw DomainError("coupling matrices must be square and of equal size");
  }
  if ((omega - omega.transpose()).cwiseAbs().maxCoeff() > 0.0 ||
      (gamma - gamma.transpose()).cwiseAbs().maxCoeff() > 0.0) {
    throw DomainError("coupling matrices must be symmetric");
  }
  Generators gen;
  gen.atoms = n;
  gen.omega = omega;
  gen.omega.diagonal().setZero();
  gen.gamma = gamma;
  const std::size_t dim = std::size_t{1} << n;
  gen.hamiltonian = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
  for (std::size_t c = 0; c < dim; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        if (i == j) continue;
        const std::size_t bi = std::size_t{1} << i;
        const std::size_t bj = std::size_t{1} << j;
        if (!(c & bj) || (c & bi)) continue;
        const std::size_t a = (c & ~bj) | bi;
        gen.hamiltonian(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) += gen.omega(i, j);
      }
  return gen;
}

Generators build_generators(std::span<const Vec3> positions, const DipoleOrientation& polarization) {
  const auto n = static_cast<int>(positions.size());
  if (positions.size() > static_cast<std::size_t>(kMaxOracleAtoms)) {
    throw CapacityError("oracle is limited to 8 atoms");
  }
  check_atoms(n);
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(n, n);
  Eigen::MatrixXd gamma = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const PairCoupling pc = pair_coupling(positions[i], positions[j], polarization);
      omega(i, j) = omega(j, i) = pc.omega;
      gamma(i, j) = gamma(j, i) = pc.gamma;
    }
  return make_generators(omega, gamma);
}

DensityMatrix liouvillian(const DensityMatrix& rho, const Generators& gen) {
  if (rho.atoms() != gen.atoms) throw DomainError("density matrix and generators disagree on atom count");
  DensityMatrix out(rho.atoms());
  apply_rhs(rho.data().data(), out.data().data(), rho.dim(), effective_terms(gen), gen.gamma, gen.atoms);
  return out;
}

std::vector<DensityMatrix> evolve_exact(const DensityMatrix& rho0, const Generators& gen,
                                        std::span<const double> times, const IntegratorSpec& spec,
                                        const OracleTolerances& tol) {
  if (rho0.atoms() != gen.atoms) throw DomainError("density matrix and generators disagree on atom count");
  if (rho0.trace_error() > tol.trace || rho0.hermiticity_error() > tol.hermiticity ||
      rho0.min_eigenvalue() < -tol.positivity) {
    throw DomainError("initial state is not a valid density matrix");
  }
  const std::size_t dim = rho0.dim();
  const auto terms = effective_terms(gen);
  auto rhs = [&](const detail::OdeState& s, detail::OdeState& ds, double) {
    apply_rhs(reinterpret_cast<const cplx*>(s.data()), reinterpret_cast<cplx*>(ds.data()), dim, terms, gen.gamma,
              gen.atoms);
  };
  detail::OdeState x0(2 * dim * dim);
  for (std::size_t k = 0; k < rho0.data().size(); ++k) {
    x0[2 * k] = rho0.data()[k].real();
    x0[2 * k + 1] = rho0.data()[k].imag();
  }
  const auto raw = detail::integrate_at(rhs, std::move(x0), times, spec);

  std::vector<DensityMatrix> out;
  out.reserve(raw.size());
  for (std::size_t t = 0; t < raw.size(); ++t) {
    DensityMatrix rho(rho0.atoms());
    auto dst = rho.data();
    for (std::size_t k = 0; k < dst.size(); ++k) dst[k] = cplx{raw[t][2 * k], raw[t][2 * k + 1]};
    const double te = rho.trace_error();
    const double he = rho.hermiticity_error();
    const double me = rho.min_eigenvalue();
    if (te > tol.trace || he > tol.hermiticity || me < -tol.positivity) {
      std::ostringstream msg;
      msg << "density matrix invariant violated at t = " << times[t] << ": trace error " << te
          << ", hermiticity error " << he << ", min eigenvalue " << me;
      throw NumericalError(msg.str());
    }
    out.push_back(std::move(rho));
  }
  return out;
}

BlochState expectations(const DensityMatrix& rho) {
  const int n = rho.atoms();
  BlochState out(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const std::size_t bk = std::size_t{1} << k;
    cplx ge{};
    double z = 0.0;
    for (std::size_t a = 0; a < rho.dim(); ++a) {
      z += ((a & bk) ? 1.0 : -1.0) * rho(a, a).real();
      if (!(a & bk)) ge += rho(a, a | bk);
    }
    out[static_cast<std::size_t>(k)] = {2.0 * ge.real(), 2.0 * ge.imag(), z};
  }
  return out;
}

namespace {

template <class T>
void put_le(std::ostream& out, T v) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char bytes[sizeof(T)];
  std::memcpy(bytes, &v, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + sizeof(T));
  out.write(reinterpret_cast<const char*>(bytes), sizeof(T));
}

}  // namespace

void write_rho_dump(std::ostream& out, std::span<const double> times, std::span<const DensityMatrix> snapshots) {
  if (times.size() != snapshots.size()) throw DomainError("times and snapshots differ in length");
  const std::uint32_t n = snapshots.empty() ? 0u : static_cast<std::uint32_t>(snapshots.front().atoms());
  const std::uint32_t dim = snapshots.empty() ? 0u : static_cast<std::uint32_t>(snapshots.front().dim());
  put_le(out, n);
  put_le(out, dim);
  put_le(out, static_cast<std::uint32_t>(snapshots.size()));
  for (std::size_t t = 0; t < snapshots.size(); ++t) {
    put_le(out, times[t]);
    for (const cplx& v : snapshots[t].data()) {
      put_le(out, v.real());
      put_le(out, v.imag());
    }
  }
}

}  // namespace ddclock
