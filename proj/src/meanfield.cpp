#include "ddclock/meanfield.hpp"

#include <cmath>
#include <string>

#include "ddclock/errors.hpp"
#include "ode.hpp"

namespace ddclock {

namespace {

// Dense coupling storage up to this many atoms; above it couplings are
// recomputed on every right-hand-side call.
constexpr std::size_t kDenseLimit = 4096;
constexpr double kBallSlack = 1e-6;

void check_trajectory(const std::vector<Bloch>& states) {
  for (const auto& s : states) {
    const double r2 = s.x * s.x + s.y * s.y + s.z * s.z;
    if (!(r2 <= (1.0 + kBallSlack) * (1.0 + kBallSlack))) {
      throw NumericalError("Bloch vector left the unit ball (|s| = " + std::to_string(std::sqrt(r2)) + ")");
    }
  }
}

class CouplingTable {
 public:
  CouplingTable(std::span<const Vec3> pos, const DipoleOrientation& e) : pos_(pos.begin(), pos.end()), e_(e) {
    n_ = pos_.size();
    if (n_ <= kDenseLimit) {
      omega_.assign(n_ * n_, 0.0);
      gamma_.assign(n_ * n_, 0.0);
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j) {
          const PairCoupling pc = pair_coupling(pos_[i], pos_[j], e_);
          omega_[i * n_ + j] = omega_[j * n_ + i] = pc.omega;
          gamma_[i * n_ + j] = gamma_[j * n_ + i] = pc.gamma;
        }
    } else {
      for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
          if (!(norm(pos_[i] - pos_[j]) > 0.0)) throw DomainError("pair_coupling: coincident positions");
    }
  }

  PairCoupling at(std::size_t k, std::size_t j) const {
    if (!omega_.empty()) return {omega_[k * n_ + j], gamma_[k * n_ + j]};
    return pair_coupling(pos_[k], pos_[j], e_);
  }

  std::size_t size() const { return n_; }

 private:
  std::vector<Vec3> pos_;
  DipoleOrientation e_;
  std::size_t n_ = 0;
  std::vector<double> omega_;
  std::vector<double> gamma_;
};

}  // namespace

void check_bloch(const Bloch& s, double tol) {
  if (!std::isfinite(s.x) || !std::isfinite(s.y) || !std::isfinite(s.z)) {
    throw DomainError("Bloch vector has non-finite components");
  }
  if (std::sqrt(s.x * s.x + s.y * s.y + s.z * s.z) > 1.0 + tol) {
    throw DomainError("initial Bloch vector lies outside the unit ball");
  }
}

std::vector<Bloch> evolve_symmetric(double omega_eff, double gamma_eff, const Bloch& init,
                                    std::span<const double> times, const IntegratorSpec& spec) {
  check_bloch(init);
  if (!std::isfinite(omega_eff) || !std::isfinite(gamma_eff)) throw DomainError("couplings must be finite");
  auto rhs = [=](const detail::OdeState& s, detail::OdeState& ds, double) {
    const double damp = 0.5 * (1.0 - gamma_eff * s[2]);
    ds[0] = omega_eff * s[1] * s[2] - damp * s[0];
    ds[1] = -omega_eff * s[0] * s[2] - damp * s[1];
    ds[2] = -(1.0 + s[2]) - 0.5 * gamma_eff * (s[0] * s[0] + s[1] * s[1]);
  };
  const auto raw = detail::integrate_at(rhs, {init.x, init.y, init.z}, times, spec);
  std::vector<Bloch> out;
  out.reserve(raw.size());
  for (const auto& s : raw) out.push_back({s[0], s[1], s[2]});
  check_trajectory(out);
  return out;
}

std::vector<BlochState> evolve_general(std::span<const Vec3> positions, const DipoleOrientation& polarization,
                                       const BlochState& init, std::span<const double> times,
                                       const IntegratorSpec& spec) {
  const std::size_t n = positions.size();
  if (n == 0) throw DomainError("evolve_general needs at least one atom");
  if (n > kMaxMeanFieldAtoms) throw CapacityError("evolve_general is limited to 10^4 atoms");
  if (init.size() != n) throw DomainError("initial state size does not match the number of atoms");
  for (const auto& s : init) check_bloch(s);
  const CouplingTable table(positions, polarization);

  auto rhs = [&](const detail::OdeState& s, detail::OdeState& ds, double) {
    const auto nn = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static) if (n > 64)
    for (std::int64_t kk = 0; kk < nn; ++kk) {
      const auto k = static_cast<std::size_t>(kk);
      double bx = 0.0, by = 0.0, gx = 0.0, gy = 0.0;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == k) continue;
        const PairCoupling pc = table.at(k, j);
        bx += pc.omega * s[3 * j];
        by += pc.omega * s[3 * j + 1];
        gx += pc.gamma * s[3 * j];
        gy += pc.gamma * s[3 * j + 1];
      }
      const double x = s[3 * k], y = s[3 * k + 1], z = s[3 * k + 2];
      ds[3 * k] = by * z - 0.5 * x + 0.5 * gx * z;
      ds[3 * k + 1] = -bx * z - 0.5 * y + 0.5 * gy * z;
      ds[3 * k + 2] = bx * y - by * x - (1.0 + z) - 0.5 * (gx * x + gy * y);
    }
  };

  detail::OdeState x0(3 * n);
  for (std::size_t k = 0; k < n; ++k) {
    x0[3 * k] = init[k].x;
    x0[3 * k + 1] = init[k].y;
    x0[3 * k + 2] = init[k].z;
  }
  const auto raw = detail::integrate_at(rhs, std::move(x0), times, spec);
  std::vector<BlochState> out;
  out.reserve(raw.size());
  for (const auto& s : raw) {
    BlochState st(n);
    for (std::size_t k = 0; k < n; ++k) st[k] = {s[3 * k], s[3 * k + 1], s[3 * k + 2]};
    check_trajectory(st);
    out.push_back(std::move(st));
  }
  return out;
}

BlochState ramsey_init(std::span<const double> phases) {
  BlochState out;
  out.reserve(phases.size());
  for (double phi : phases) {
    if (!std::isfinite(phi)) throw DomainError("phases must be finite");
    out.push_back({std::cos(phi), -std::sin(phi), 0.0});
  }
  return out;
}

}  // namespace ddclock
