#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <vector>

namespace boson_decay {

// Units: hbar = k_B = 1. Frequencies and rates share one angular-frequency
// unit; times are in its inverse.

/// Flat band spectral density centred on band_center.
///
/// Inside the band J(omega) = gamma / (2 pi), so the golden-rule population
/// decay rate 2 pi J(omega_b) equals gamma and |u(t)|^2 -> exp(-gamma t) in the
/// broadband limit. Outside the band J = 0.
struct SpectralDensitySpec
{
    double gamma = 1.0;
    double band_center = 0.0;
    double half_bandwidth = 1.0;

    /// Validating constructor; throws std::invalid_argument.
    static SpectralDensitySpec make(double gamma, double band_center, double half_bandwidth);

    double band_min() const { return band_center - half_bandwidth; }
    double band_max() const { return band_center + half_bandwidth; }
    /// Integral of J over the band.
    double total_weight() const;
};

double spectral_density(const SpectralDensitySpec& spec, double omega);

struct BathMode
{
    double omega = 0.0;
    double xi = 0.0;  // real, nonnegative coupling
};

enum class Discretization
{
    midpoint
};

class DiscreteBath
{
  public:
    DiscreteBath(SpectralDensitySpec spec, std::vector<BathMode> modes, Discretization scheme);

    const SpectralDensitySpec& spec() const { return spec_; }
    Discretization scheme() const { return scheme_; }
    std::span<const BathMode> modes() const { return modes_; }
    const BathMode& mode(std::size_t j) const { return modes_[j]; }
    std::size_t size() const { return modes_.size(); }

    std::vector<double> frequencies() const;
    std::vector<double> couplings() const;
    /// sum_j xi_j^2
    double coupling_sum() const;
    double spacing() const;
    /// 2 pi / spacing: beyond this the discrete bath stops mimicking a continuum.
    double recurrence_time() const { return 2.0 * 3.141592653589793 / spacing(); }

  private:
    SpectralDensitySpec spec_;
    std::vector<BathMode> modes_;
    Discretization scheme_;
};

/// Uniform midpoint grid: omega_j = omega_c - Delta + (j - 1/2) d, d = 2 Delta / n,
/// xi_j = sqrt(J(omega_j) d).
DiscreteBath discretize_bath(const SpectralDensitySpec& spec, std::size_t n_modes);

/// Bose-Einstein occupation 1 / (exp(beta omega) - 1). beta = +inf gives 0.
/// Throws std::domain_error for beta = 0 (infinite occupation) and
/// std::invalid_argument for omega <= 0 or beta < 0.
double thermal_occupation(double beta, double omega);

/// Inverse temperature together with the resonant occupation at omega_b.
struct ThermalSpec
{
    double beta = 0.0;
    double n_th = 0.0;

    static ThermalSpec make(double beta, double omega_b);
};

/// Per-mode occupations n_j.
std::vector<double> bath_occupations(const DiscreteBath& bath, const ThermalSpec& thermal);

/// CSV with header `j,omega_j,xi_j`, j counted from 1.
void write_bath_csv(std::ostream& out, const DiscreteBath& bath);

}  // namespace boson_decay
