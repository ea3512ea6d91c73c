#include "boson_decay/spectral_bath.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include "boson_decay/format.hpp"

namespace boson_decay {

SpectralDensitySpec SpectralDensitySpec::make(double gamma, double band_center,
                                              double half_bandwidth)
{
    if (!(gamma > 0.0) || !std::isfinite(gamma))
        throw std::invalid_argument("spectral density: gamma must be > 0");
    if (!(half_bandwidth > 0.0) || !std::isfinite(half_bandwidth))
        throw std::invalid_argument("spectral density: half_bandwidth must be > 0");
    if (!std::isfinite(band_center))
        throw std::invalid_argument("spectral density: band_center must be finite");
    return SpectralDensitySpec{gamma, band_center, half_bandwidth};
}

double SpectralDensitySpec::total_weight() const
{
    return gamma / (2.0 * std::numbers::pi) * (2.0 * half_bandwidth);
}

double spectral_density(const SpectralDensitySpec& spec, double omega)
{
    if (std::abs(omega - spec.band_center) <= spec.half_bandwidth)
        return spec.gamma / (2.0 * std::numbers::pi);
    return 0.0;
}

DiscreteBath::DiscreteBath(SpectralDensitySpec spec, std::vector<BathMode> modes,
                           Discretization scheme)
    : spec_(spec), modes_(std::move(modes)), scheme_(scheme)
{
    if (modes_.empty())
        throw std::invalid_argument("discrete bath needs at least one mode");
    for (std::size_t j = 0; j < modes_.size(); ++j)
    {
        if (!(modes_[j].xi >= 0.0))
            throw std::invalid_argument("bath coupling must be nonnegative");
        if (j > 0 && !(modes_[j].omega > modes_[j - 1].omega))
            throw std::invalid_argument("bath modes must be strictly ascending in omega");
    }
}

std::vector<double> DiscreteBath::frequencies() const
{
    std::vector<double> out(modes_.size());
    for (std::size_t j = 0; j < modes_.size(); ++j)
        out[j] = modes_[j].omega;
    return out;
}

std::vector<double> DiscreteBath::couplings() const
{
    std::vector<double> out(modes_.size());
    for (std::size_t j = 0; j < modes_.size(); ++j)
        out[j] = modes_[j].xi;
    return out;
}

double DiscreteBath::coupling_sum() const
{
    double acc = 0.0;
    for (const auto& m : modes_)
        acc += m.xi * m.xi;
    return acc;
}

double DiscreteBath::spacing() const
{
    return 2.0 * spec_.half_bandwidth / static_cast<double>(modes_.size());
}

DiscreteBath discretize_bath(const SpectralDensitySpec& spec, std::size_t n_modes)
{
    if (n_modes == 0)
        throw std::invalid_argument("discretize_bath: n_modes must be >= 1");
    const double d = 2.0 * spec.half_bandwidth / static_cast<double>(n_modes);
    std::vector<BathMode> modes(n_modes);
    for (std::size_t j = 0; j < n_modes; ++j)
    {
        const double omega = spec.band_min() + (static_cast<double>(j) + 0.5) * d;
        modes[j] = BathMode{omega, std::sqrt(spectral_density(spec, omega) * d)};
    }
    return DiscreteBath(spec, std::move(modes), Discretization::midpoint);
}

double thermal_occupation(double beta, double omega)
{
    if (!(omega > 0.0))
        throw std::invalid_argument("thermal_occupation: omega must be > 0");
    if (!(beta >= 0.0))
        throw std::invalid_argument("thermal_occupation: beta must be >= 0");
    if (beta == 0.0)
        throw std::domain_error("thermal_occupation: infinite occupation at beta = 0");
    return 1.0 / std::expm1(beta * omega);
}

ThermalSpec ThermalSpec::make(double beta, double omega_b)
{
    return ThermalSpec{beta, thermal_occupation(beta, omega_b)};
}

std::vector<double> bath_occupations(const DiscreteBath& bath, const ThermalSpec& thermal)
{
    std::vector<double> out(bath.size());
    for (std::size_t j = 0; j < bath.size(); ++j)
        out[j] = thermal_occupation(thermal.beta, bath.mode(j).omega);
    return out;
}

void write_bath_csv(std::ostream& out, const DiscreteBath& bath)
{
    out << "j,omega_j,xi_j\n";
    for (std::size_t j = 0; j < bath.size(); ++j)
        out << (j + 1) << ',' << format_double(bath.mode(j).omega) << ','
            << format_double(bath.mode(j).xi) << '\n';
}

}  // namespace boson_decay
