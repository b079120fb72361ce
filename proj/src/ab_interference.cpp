#include "dirac/ab_interference.hpp"

#include <cmath>
#include <numbers>

#include "dirac/errors.hpp"

namespace dirac {

namespace {

constexpr double kPi = std::numbers::pi;
using Complex = std::complex<double>;
const Complex kI(0.0, 1.0);

// One axis of the split Hamiltonian with the LU factors of (1 + i tau H).
class AxisOperator {
 public:
  AxisOperator(const WaveGrid& grid, int axis, const Eigen::ArrayXXd& link_phase, double tau)
      : axis_(axis), tau_(tau) {
    const double t = 1.0 / (2.0 * grid.mass * grid.h * grid.h);
    const int nx = grid.nx, ny = grid.ny;
    diag_ = Eigen::ArrayXXd::Constant(nx, ny, 2.0 * t);
    hop_ = Eigen::ArrayXXcd::Zero(nx, ny);
    for (int j = 0; j < ny; ++j) {
      for (int i = 0; i < nx; ++i) {
        if (grid.blocked(i, j)) {
          diag_(i, j) = 0.0;
          continue;
        }
        const int ni = axis == 0 ? i + 1 : i, nj = axis == 0 ? j : j + 1;
        if (ni >= nx || nj >= ny || grid.blocked(ni, nj)) continue;
        // H_{k,k+1} = -t e^{-i theta}: hopping forward gains e^{+i theta}.
        hop_(i, j) = -t * std::polar(1.0, -link_phase(i, j));
      }
    }
    factorize(grid);
  }

  void apply(Eigen::ArrayXXcd& psi) const {
    const Eigen::ArrayXXcd rhs = psi - kI * tau_ * multiply(psi);
    solve(rhs, psi);
  }

 private:
  Eigen::ArrayXXcd multiply(const Eigen::ArrayXXcd& psi) const {
    Eigen::ArrayXXcd out = diag_.cast<Complex>() * psi;
    if (axis_ == 0) {
      const auto m = psi.rows() - 1;
      out.topRows(m) += hop_.topRows(m) * psi.bottomRows(m);
      out.bottomRows(m) += hop_.topRows(m).conjugate() * psi.topRows(m);
    } else {
      const auto m = psi.cols() - 1;
      out.leftCols(m) += hop_.leftCols(m) * psi.rightCols(m);
      out.rightCols(m) += hop_.leftCols(m).conjugate() * psi.leftCols(m);
    }
    return out;
  }

  // Thomas factors: sub_k multiplies the previous unknown, upper_k the next.
  void factorize(const WaveGrid& grid) {
    const int nx = grid.nx, ny = grid.ny;
    sub_ = Eigen::ArrayXXcd::Zero(nx, ny);
    cprime_ = Eigen::ArrayXXcd::Zero(nx, ny);
    inv_denom_ = Eigen::ArrayXXcd::Zero(nx, ny);
    const Complex it = kI * tau_;
    if (axis_ == 0) {
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
          const Complex a = i > 0 ? it * std::conj(hop_(i - 1, j)) : Complex{};
          const Complex b = 1.0 + it * diag_(i, j);
          const Complex c = it * hop_(i, j);
          const Complex denom = i > 0 ? b - a * cprime_(i - 1, j) : b;
          sub_(i, j) = a;
          inv_denom_(i, j) = 1.0 / denom;
          cprime_(i, j) = c / denom;
        }
      }
    } else {
      for (int j = 0; j < ny; ++j) {
        const Eigen::ArrayXcd a = j > 0 ? Eigen::ArrayXcd(it * hop_.col(j - 1).conjugate()) : Eigen::ArrayXcd::Zero(nx);
        const Eigen::ArrayXcd b = 1.0 + it * diag_.col(j).cast<Complex>();
        const Eigen::ArrayXcd denom = j > 0 ? Eigen::ArrayXcd(b - a * cprime_.col(j - 1)) : b;
        sub_.col(j) = a;
        inv_denom_.col(j) = denom.inverse();
        cprime_.col(j) = it * hop_.col(j) * inv_denom_.col(j);
      }
    }
  }

  void solve(const Eigen::ArrayXXcd& rhs, Eigen::ArrayXXcd& x) const {
    const auto nx = rhs.rows(), ny = rhs.cols();
    if (axis_ == 0) {
      for (Eigen::Index j = 0; j < ny; ++j) {
        x(0, j) = rhs(0, j) * inv_denom_(0, j);
        for (Eigen::Index i = 1; i < nx; ++i) x(i, j) = (rhs(i, j) - sub_(i, j) * x(i - 1, j)) * inv_denom_(i, j);
        for (Eigen::Index i = nx - 2; i >= 0; --i) x(i, j) -= cprime_(i, j) * x(i + 1, j);
      }
    } else {
      x.col(0) = rhs.col(0) * inv_denom_.col(0);
      for (Eigen::Index j = 1; j < ny; ++j)
        x.col(j) = (rhs.col(j) - sub_.col(j) * x.col(j - 1)) * inv_denom_.col(j);
      for (Eigen::Index j = ny - 2; j >= 0; --j) x.col(j) -= cprime_.col(j) * x.col(j + 1);
    }
  }

  int axis_;
  double tau_;
  Eigen::ArrayXXd diag_;
  Eigen::ArrayXXcd hop_;
  Eigen::ArrayXXcd sub_, cprime_, inv_denom_;
};

// Link phases theta(i, j) on the hop from (i, j) to its +x / +y neighbour.
void cut_phases(const WaveGrid& grid, const FluxLine& line, Eigen::ArrayXXd& theta_x, Eigen::ArrayXXd& theta_y) {
  const int px = static_cast<int>(std::floor(line.x / grid.h));
  const int py = static_cast<int>(std::floor(line.y / grid.h));
  const double alpha = line.phase();
  switch (line.cut) {
    case CutDirection::Up:
      for (int j = py + 1; j < grid.ny; ++j) theta_x(px, j) = alpha;
      break;
    case CutDirection::Down:
      for (int j = 0; j <= py; ++j) theta_x(px, j) = alpha;
      break;
    case CutDirection::Right:
      for (int i = px + 1; i < grid.nx; ++i) theta_y(i, py) = alpha;
      break;
    case CutDirection::Left:
      for (int i = 0; i <= px; ++i) theta_y(i, py) = alpha;
      break;
  }
}

Eigen::ArrayXXd sponge_mask(const WaveGrid& grid) {
  Eigen::ArrayXd mx = Eigen::ArrayXd::Ones(grid.nx), my = Eigen::ArrayXd::Ones(grid.ny);
  const int w = grid.sponge_width;
  auto ramp = [&](Eigen::ArrayXd& m) {
    const auto n = m.size();
    for (int k = 0; k < w; ++k) {
      const double depth = static_cast<double>(w - k) / w;  // 1 at the edge
      const double s = std::sin(0.5 * kPi * depth);
      const double factor = std::exp(-grid.sponge_strength * grid.dt * s * s);
      m(k) = factor;
      m(n - 1 - k) = factor;
    }
  };
  if (w > 0) {
    ramp(mx);
    ramp(my);
  }
  return mx.matrix() * my.matrix().transpose();
}

}  // namespace

WaveGrid WaveGrid::make(int nx, int ny, double h, double mass, double dt, double sponge_fraction) {
  WaveGrid g;
  g.nx = nx;
  g.ny = ny;
  g.h = h;
  g.mass = mass;
  g.dt = dt;
  g.psi = Eigen::ArrayXXcd::Zero(nx, ny);
  g.blocked = ArrayXXb::Constant(nx, ny, false);
  g.sponge_width = static_cast<int>(std::ceil(sponge_fraction * std::min(nx, ny)));
  g.validate();
  return g;
}

void WaveGrid::validate() const {
  if (nx < 64 || ny < 64) throw ConfigurationError("WaveGrid: need nx, ny >= 64");
  if (!(h > 0.0) || !(mass > 0.0) || !(dt > 0.0)) throw ConfigurationError("WaveGrid: h, mass and dt must be > 0");
  if (psi.rows() != nx || psi.cols() != ny || blocked.rows() != nx || blocked.cols() != ny)
    throw ConfigurationError("WaveGrid: array shapes do not match nx, ny");
  if (2 * sponge_width >= std::min(nx, ny)) throw ConfigurationError("WaveGrid: sponge covers the whole grid");
  if (dt * max_energy() > kMaxPhasePerStep)
    throw ConfigurationError("WaveGrid: dt * E_max = " + std::to_string(dt * max_energy()) +
                             " exceeds the stability bound; reduce dt or coarsen h");
}

double WaveGrid::norm() const { return psi.abs2().sum() * h * h; }

Eigen::ArrayXXd WaveGrid::density() const { return psi.abs2(); }

bool WaveGrid::in_sponge(int i, int j) const {
  return i < sponge_width || j < sponge_width || i >= nx - sponge_width || j >= ny - sponge_width;
}

double WaveGrid::max_energy() const { return 4.0 / (mass * h * h); }

void load_gaussian(WaveGrid& grid, const GaussianPacket& p) {
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      if (grid.blocked(i, j)) {
        grid.psi(i, j) = 0.0;
        continue;
      }
      const double x = i * grid.h, y = j * grid.h;
      const double ux = (x - p.x0) / p.sigma_x, uy = (y - p.y0) / p.sigma_y;
      grid.psi(i, j) = std::exp(-0.25 * (ux * ux + uy * uy)) * std::polar(1.0, p.kx * x + p.ky * y);
    }
  }
  const double n = grid.norm();
  if (!(n > 0.0)) throw DomainError("load_gaussian: packet vanishes on the open sites");
  grid.psi /= std::sqrt(n);
}

double two_path_fringe_shift(double q, double flux) {
  const double turns = q * flux / (2.0 * kPi);
  double frac = turns - std::floor(turns);
  // Snap values within rounding of an integer to zero.
  if (frac > 1.0 - 1e-12 || frac < 1e-12) frac = 0.0;
  return frac;
}

WaveGrid propagate_with_flux(WaveGrid grid, const std::optional<FluxLine>& line, int steps,
                             const StepObserver& observer) {
  grid.validate();
  if (steps < 0) throw DomainError("propagate_with_flux: negative step count");
  Eigen::ArrayXXd theta_x = Eigen::ArrayXXd::Zero(grid.nx, grid.ny);
  Eigen::ArrayXXd theta_y = Eigen::ArrayXXd::Zero(grid.nx, grid.ny);
  if (line) {
    const double i = line->x / grid.h, j = line->y / grid.h;
    if (!(i >= grid.sponge_width && j >= grid.sponge_width && i < grid.nx - 1 - grid.sponge_width &&
          j < grid.ny - 1 - grid.sponge_width))
      throw ConfigurationError("propagate_with_flux: flux line must lie inside the grid, clear of the sponge");
    cut_phases(grid, *line, theta_x, theta_y);
  }
  const AxisOperator half_x(grid, 0, theta_x, 0.25 * grid.dt);
  const AxisOperator full_y(grid, 1, theta_y, 0.5 * grid.dt);
  const Eigen::ArrayXXd mask = sponge_mask(grid);
  const bool absorbing = grid.sponge_width > 0;
  for (int s = 0; s < steps; ++s) {
    half_x.apply(grid.psi);
    full_y.apply(grid.psi);
    half_x.apply(grid.psi);
    if (absorbing) grid.psi *= mask;
    if (observer) observer(grid, s);
  }
  return grid;
}

double invisibility_metric(const WaveGrid& with_flux, const WaveGrid& free, double far_side_x) {
  if (with_flux.nx != free.nx || with_flux.ny != free.ny || with_flux.psi.rows() != free.psi.rows() ||
      with_flux.psi.cols() != free.psi.cols())
    throw DomainError("invisibility_metric: grid shapes differ");
  double diff = 0.0, ref = 0.0;
  for (int j = 0; j < free.ny; ++j) {
    for (int i = 0; i < free.nx; ++i) {
      if (free.in_sponge(i, j) || i * free.h <= far_side_x) continue;
      const double a = std::norm(with_flux.psi(i, j)), b = std::norm(free.psi(i, j));
      diff += (a - b) * (a - b);
      ref += b * b;
    }
  }
  if (ref == 0.0) return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return std::sqrt(diff / ref);
}

WaveGrid ScatteringSetup::initial_grid() const {
  WaveGrid grid = WaveGrid::make(n, n, h, mass, dt);
  load_gaussian(grid, {packet_x * h, (n / 2) * h, sigma * h, sigma * h, k0 / h, 0.0});
  return grid;
}

FluxLine ScatteringSetup::flux_line(double q, double flux, CutDirection cut) const {
  return {(n / 2 + 0.5) * h, (n / 2 + 0.5) * h, flux, q, cut};
}

WaveGrid DoubleSlitSetup::initial_grid() const {
  WaveGrid grid = WaveGrid::make(n, n, h, mass, dt);
  const int c = center_y();
  const int upper_lo = c + slit_separation / 2 - slit_width / 2;
  for (int i = wall_x; i < wall_x + wall_thickness; ++i) {
    for (int j = 0; j < n; ++j) {
      const bool upper = j >= upper_lo && j < upper_lo + slit_width;
      const int mirror = 2 * c - j;
      const bool lower = mirror >= upper_lo && mirror < upper_lo + slit_width;
      grid.blocked(i, j) = !(upper || lower);
    }
  }
  load_gaussian(grid, {packet_x * h, c * h, sigma_x * h, sigma_y * h, k0 / h, 0.0});
  return grid;
}

FluxLine DoubleSlitSetup::flux_line(double q, double flux) const {
  return {(wall_x + 0.5) * h, (center_y() + 0.5) * h, flux, q, CutDirection::Up};
}

Eigen::ArrayXd DoubleSlitSetup::detector_pattern(const std::optional<FluxLine>& line) const {
  Eigen::ArrayXd accumulated = Eigen::ArrayXd::Zero(n);
  const int column = detector_x;
  propagate_with_flux(initial_grid(), line, steps, [&](const WaveGrid& g, int) {
    accumulated += g.psi.row(column).transpose().abs2();
  });
  return accumulated;
}

std::complex<double> fringe_phasor(const Eigen::ArrayXd& pattern, double center, double k, double half_window) {
  std::complex<double> acc{0.0, 0.0};
  for (Eigen::Index j = 0; j < pattern.size(); ++j) {
    const double u = j - center;
    if (std::abs(u) >= half_window) continue;
    const double c = std::cos(0.5 * kPi * u / half_window);
    acc += c * c * pattern(j) * std::polar(1.0, k * u);
  }
  return acc;
}

FringeMeasurement measure_fringe_shift(const DoubleSlitSetup& setup, const Eigen::ArrayXd& free_pattern,
                                       const Eigen::ArrayXd& flux_pattern) {
  if (free_pattern.size() != flux_pattern.size()) throw DomainError("measure_fringe_shift: pattern sizes differ");
  const double c = setup.center_y();
  const double distance = setup.detector_x - setup.wall_x - 0.5 * setup.wall_thickness;
  // Far-field estimate, refined on the free pattern below.
  const double k_geo = setup.k0 * setup.slit_separation / std::hypot(distance, 0.5 * setup.slit_separation);
  auto window_for = [&](double k) { return 2.0 * (2.0 * kPi / k); };  // two periods each side
  double best_k = k_geo, best_amp = -1.0;
  for (int s = 0; s <= 400; ++s) {
    const double k = k_geo * (0.6 + 0.8 * s / 400.0);
    const double amp = std::abs(fringe_phasor(free_pattern, c, k, window_for(k)));
    if (amp > best_amp) best_amp = amp, best_k = k;
  }
  const double window = window_for(best_k);
  FringeMeasurement m;
  m.fringe_period = 2.0 * kPi / best_k;
  m.phase_free = std::arg(fringe_phasor(free_pattern, c, best_k, window));
  m.phase_flux = std::arg(fringe_phasor(flux_pattern, c, best_k, window));
  double turns = (m.phase_flux - m.phase_free) / (2.0 * kPi);
  turns -= std::floor(turns);
  if (turns > 1.0 - 1e-12) turns = 0.0;
  m.displacement = turns;
  return m;
}

}  // namespace dirac
