#pragma once

// Exact density-matrix evolution for up to 8 atoms:
//   rho' = i[rho, H] + 1/2 sum_ij Gamma_ij (2 s_i^- rho s_j^+ - s_i^+ s_j^- rho - rho s_i^+ s_j^-)
//   H = sum_{i != j} Omega_ij s_i^+ s_j^-,  Gamma_ii = 1.
// Basis index bit k set <=> atom k excited.

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "ddclock/couplings.hpp"
#include "ddclock/integrator.hpp"
#include "ddclock/meanfield.hpp"

namespace ddclock {

inline constexpr int kMaxOracleAtoms = 8;

using cplx = std::complex<double>;

class DensityMatrix {
 public:
  /// All atoms in the ground state. Throws CapacityError for n > 8.
  explicit DensityMatrix(int atoms);

  static DensityMatrix product(const BlochState& atoms);
  static DensityMatrix maximally_mixed(int atoms);

  int atoms() const { return atoms_; }
  std::size_t dim() const { return dim_; }

  cplx& operator()(std::size_t a, std::size_t b) { return data_[a * dim_ + b]; }
  const cplx& operator()(std::size_t a, std::size_t b) const { return data_[a * dim_ + b]; }

  /// Row-major storage.
  std::span<cplx> data() { return data_; }
  std::span<const cplx> data() const { return data_; }

  double trace_error() const;
  double hermiticity_error() const;
  double min_eigenvalue() const;

 private:
  int atoms_;
  std::size_t dim_;
  std::vector<cplx> data_;
};

struct Generators {
  int atoms = 0;
  Eigen::MatrixXd omega;  // zero diagonal
  Eigen::MatrixXd gamma;  // unit diagonal
  Eigen::MatrixXcd hamiltonian;
};

/// Couplings from the geometry. Throws CapacityError for more than 8 atoms
/// and DomainError for coincident positions.
Generators build_generators(std::span<const Vec3> positions, const DipoleOrientation& polarization);

/// Generators from explicit coupling matrices (symmetric, N x N).
Generators make_generators(const Eigen::MatrixXd& omega, const Eigen::MatrixXd& gamma);

/// Right-hand side of the master equation.
DensityMatrix liouvillian(const DensityMatrix& rho, const Generators& gen);

struct OracleTolerances {
  double trace = 1e-9;
  double hermiticity = 1e-10;
  double positivity = 1e-8;
};

/// Snapshots at `times`. Invariants are checked at every output; a violation
/// throws NumericalError naming the time and the offending quantity.
std::vector<DensityMatrix> evolve_exact(const DensityMatrix& rho0, const Generators& gen,
                                        std::span<const double> times, const IntegratorSpec& spec = {},
                                        const OracleTolerances& tol = {});

/// Per-atom Pauli expectations, same convention as the mean-field module.
BlochState expectations(const DensityMatrix& rho);

/// Little-endian dump: uint32 N, uint32 dim, uint32 count, then per snapshot
/// a float64 time followed by dim*dim (re, im) float64 pairs, row-major.
void write_rho_dump(std::ostream& out, std::span<const double> times, std::span<const DensityMatrix> snapshots);

}  // namespace ddclock
