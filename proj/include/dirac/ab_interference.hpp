#pragma once

// Charged-particle waves on a 2-D lattice threaded by a thin flux line.
//
// The flux line is a Peierls cut: every hop in the positive lattice direction
// across a half-line running from the punctured plaquette to the boundary
// carries the phase e^{i q Phi}. Propagation is a Strang product of
// Crank-Nicolson (Cayley) factors along x and y, so each step is exactly
// unitary away from the absorbing sponge.

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <limits>
#include <optional>

namespace dirac {

using ArrayXXb = Eigen::Array<bool, Eigen::Dynamic, Eigen::Dynamic>;

/// Largest allowed dt * E_max, E_max the top of the lattice spectrum.
inline constexpr double kMaxPhasePerStep = 2.0;

struct WaveGrid {
  int nx = 0;
  int ny = 0;
  double h = 1.0;
  double mass = 1.0;
  double dt = 0.5;
  Eigen::ArrayXXcd psi;      // psi(i, j) at x = i h, y = j h
  ArrayXXb blocked;          // hard-wall sites, psi = 0 there
  int sponge_width = 0;      // cells of cosine-ramp absorber on every edge
  double sponge_strength = 0.5;

  /// Zero wave on an open grid with a sponge of `sponge_fraction` of the
  /// smaller dimension on each edge.
  static WaveGrid make(int nx, int ny, double h, double mass, double dt, double sponge_fraction = 0.1);

  void validate() const;
  double norm() const;                // sum |psi|^2 h^2
  Eigen::ArrayXXd density() const;    // |psi|^2
  bool in_sponge(int i, int j) const;
  double max_energy() const;          // upper bound of the lattice spectrum
};

struct GaussianPacket {
  double x0 = 0.0, y0 = 0.0;
  double sigma_x = 8.0, sigma_y = 8.0;
  double kx = 0.0, ky = 0.0;
};

/// Loads a normalized Gaussian packet, zero on blocked sites.
void load_gaussian(WaveGrid& grid, const GaussianPacket& packet);

enum class CutDirection { Up, Down, Left, Right };

/// Thin flux through one plaquette. The puncture is the plaquette containing
/// `x, y` (physical coordinates); the cut runs from it to the boundary.
struct FluxLine {
  double x = 0.0;
  double y = 0.0;
  double flux = 0.0;
  double q = 1.0;
  CutDirection cut = CutDirection::Up;

  double phase() const { return q * flux; }
};

/// ((q Phi / 2 pi) mod 1): fringe displacement as a fraction of one period.
double two_path_fringe_shift(double q, double flux);

using StepObserver = std::function<void(const WaveGrid&, int step)>;

/// Evolves `grid` for `steps` steps under the minimally coupled lattice
/// Hamiltonian. Throws ConfigurationError before stepping if dt is too large.
WaveGrid propagate_with_flux(WaveGrid grid, const std::optional<FluxLine>& line, int steps,
                             const StepObserver& observer = {});

/// Relative L2 distance between the densities of two grids over non-sponge
/// sites with x > far_side_x.
double invisibility_metric(const WaveGrid& with_flux, const WaveGrid& free,
                           double far_side_x = -std::numeric_limits<double>::infinity());

/// Packet aimed straight at a flux line in an open box.
struct ScatteringSetup {
  int n = 512;
  double h = 1.0;
  double mass = 1.0;
  double dt = 0.5;
  double k0 = 1.0;
  double sigma = 16.0;
  double packet_x = 140.0;
  int steps = 560;

  WaveGrid initial_grid() const;
  FluxLine flux_line(double q, double flux, CutDirection cut = CutDirection::Right) const;
};

/// Two slits in a hard wall with the flux line in the wall between them and
/// the cut running up through the upper slit. A detector column accumulates
/// the time-integrated intensity.
struct DoubleSlitSetup {
  int n = 512;
  double h = 1.0;
  double mass = 1.0;
  double dt = 0.5;
  double k0 = 1.0;
  int wall_x = 200;
  int wall_thickness = 2;
  int slit_separation = 40;
  int slit_width = 6;
  double packet_x = 130.0;
  double sigma_x = 12.0;
  double sigma_y = 40.0;
  int detector_x = 440;
  int steps = 1000;

  int center_y() const { return n / 2; }
  WaveGrid initial_grid() const;
  FluxLine flux_line(double q, double flux) const;
  /// Detector intensity along y, optionally with a flux line.
  Eigen::ArrayXd detector_pattern(const std::optional<FluxLine>& line) const;
};

struct FringeMeasurement {
  double displacement = 0.0;  // fraction of a fringe toward +y, in [0, 1)
  double fringe_period = 0.0; // in lattice units
  double phase_free = 0.0;
  double phase_flux = 0.0;
};

/// Fringe phase of a detector pattern around `center` using a Hann-windowed
/// projection at wavenumber `k`.
std::complex<double> fringe_phasor(const Eigen::ArrayXd& pattern, double center, double k, double half_window);

/// Compares the double-slit pattern with and without flux and returns the
/// displacement of the fringes.
FringeMeasurement measure_fringe_shift(const DoubleSlitSetup& setup, const Eigen::ArrayXd& free_pattern,
                                       const Eigen::ArrayXd& flux_pattern);

}  // namespace dirac
