#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "boson_decay/errors.hpp"
#include "boson_decay/propagator.hpp"
#include "boson_decay/thermal.hpp"
#include "generators.hpp"

using namespace boson_decay;

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

DiscreteBath wwa_bath(std::size_t n = 2000)
{
    return discretize_bath(SpectralDensitySpec::make(1.0, 100.0, 20.0), n);
}

ThermalSpec unit_occupation(double omega_b = 100.0)
{
    return ThermalSpec::make(std::log(2.0) / omega_b, omega_b);
}

struct EnvThreads
{
    explicit EnvThreads(const char* value) { setenv("BOSON_DECAY_THREADS", value, 1); }
    ~EnvThreads() { unsetenv("BOSON_DECAY_THREADS"); }
};

}  // namespace

TEST_CASE("closed-form Phi")
{
    CHECK(phi_closed(1.0, 1.0, 0.0).value == 1.0);
    CHECK(phi_closed(1.0, 1.0, 60.0).value == doctest::Approx(2.0).epsilon(1e-15));
    for (double t : {0.0, 0.3, 5.0, 100.0})
        CHECK(phi_closed(0.0, 1.0, t).value == 1.0);
    CHECK(phi_closed(0.5, 1.0, 1.0).method == PhiMethod::closed_form);
    double prev = 1.0;
    for (int k = 0; k < 100; ++k)
    {
        const double v = phi_closed(2.0, 0.7, 0.1 * k).value;
        CHECK(v >= prev);
        prev = v;
    }
    CHECK_THROWS_AS(phi_closed(1.0, 1.0, -1.0), std::invalid_argument);
    CHECK_THROWS_AS(phi_closed(-1.0, 1.0, 1.0), std::invalid_argument);
}

TEST_CASE("discrete Phi")
{
    const auto bath = wwa_bath();
    const ExactPropagator prop(SystemMode{100.0}, bath);
    const auto thermal = unit_occupation();
    CHECK(thermal.n_th == doctest::Approx(1.0).epsilon(1e-12));

    const auto p0 = phi_discrete(bath, thermal, prop.coefficients(0.0));
    CHECK(p0.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p0.method == PhiMethod::discrete_sum);

    const ThermalSpec cold{inf, 0.0};
    for (double t : {0.5, 2.0, 5.0})
        CHECK(phi_discrete(bath, cold, prop.coefficients(t)).value == 1.0);

    const auto p1 = phi_discrete(bath, thermal, prop.coefficients(1.0));
    MESSAGE("Phi(gamma t = 1) discrete " << p1.value << " closed "
                                         << phi_closed(1.0, 1.0, 1.0).value);
    CHECK(std::abs(p1.value / phi_closed(1.0, 1.0, 1.0).value - 1.0) <= 2e-2);
    CHECK(p1.value == doctest::Approx(1.63212).epsilon(2e-2));

    PropagatorCoefficients wrong;
    CHECK_THROWS_AS(phi_discrete(bath, thermal, wrong), std::invalid_argument);
}

TEST_CASE("conditional wavefunction")
{
    const cplx alpha(1.5, -0.5);
    const cplx u = std::polar(0.6, 1.1);
    const auto same = conditional_wavefunction(alpha, u, PhiFactor{1.0});
    CHECK(same.weight == 1.0);
    CHECK(std::abs(same.label - alpha * u) < 1e-15);
    const auto start = conditional_wavefunction(alpha, 1.0, PhiFactor{1.0});
    CHECK(start.label == alpha);
    const auto late = conditional_wavefunction(1.0, 0.0, PhiFactor{2.0});
    CHECK(late.label.real() == doctest::Approx(1.0 - std::sqrt(0.5)).epsilon(1e-15));
    CHECK(late.weight == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
    CHECK(late.label.real() == doctest::Approx(0.29289).epsilon(1e-5));
    CHECK_THROWS_AS(conditional_wavefunction(1.0, 0.5, PhiFactor{0.5}), std::invalid_argument);
}

TEST_CASE("thermal mean number and its limits")
{
    const cplx alpha(2.0, 0.0);
    for (double t : {0.0, 0.4, 3.0})
    {
        const cplx u = analytic_u(SystemMode{10.0}, 1.0, t);
        CHECK(paper_mean_number_T(alpha, u, PhiFactor{1.0}) ==
              doctest::Approx(4.0 * std::exp(-t)).epsilon(1e-12));
    }

    // low temperature: vacuum fluctuations dominate
    {
        const double t = 1.0;
        const auto phi = phi_closed(1e-3, 1.0, t);
        const cplx u = std::exp(-0.5 * t);
        CHECK(paper_mean_number_T(alpha, u, phi) ==
              doctest::Approx(paper_mean_number_low_T(alpha, 1.0, t)).epsilon(1e-2));
    }

    // high temperature: the leading 1/Phi term is the printed asymptote; the
    // full expression differs from it by the cross term 2 Re(u - 1) / sqrt(Phi)
    {
        const double n_th = 1e3;
        const double beta_omega = std::log1p(1.0 / n_th);
        const double t = 1.0;
        const auto phi = phi_closed(n_th, 1.0, t);
        const double asym = paper_mean_number_high_T(alpha, beta_omega, 1.0, t, phi);
        CHECK(std::norm(alpha) / phi.value == doctest::Approx(asym).epsilon(1e-2));
        const cplx u = std::exp(-0.5 * t);
        const double full = paper_mean_number_T(alpha, u, phi);
        const double cross = 2.0 * std::abs(u - 1.0) / std::sqrt(phi.value);
        CHECK(std::abs(full / asym - 1.0) <= cross + 1e-2);
        MESSAGE("high-T: full " << full << " asymptote " << asym);
    }
    CHECK_THROWS_AS(paper_mean_number_high_T(alpha, 1.0, 1.0, 1.0, phi_closed(1.0, 1.0, 1.0)),
                    OutsideAsymptoticRegime);
}

TEST_CASE("effective Hamiltonian laws")
{
    for (unsigned n : {1u, 2u, 5u})
    {
        const auto h = EffectiveHamiltonian::make(7.0, 0.8, 0.0);
        for (double t : {0.0, 0.3, 2.0})
        {
            const auto f = heff_evolve_fock(h, n, t);
            CHECK(std::abs(f.mean_number - n * std::exp(-static_cast<double>(n) * 0.8 * t)) <=
                  1e-12);
            CHECK(std::abs(f.decay_time - 1.0 / (n * 0.8)) <= 1e-12);
            CHECK(std::abs(f.mean_number - n * std::norm(f.amplitude)) <= 1e-12);
        }
    }
    const auto h1 = EffectiveHamiltonian::make(100.0, 1.0, 1.0);
    CHECK(std::abs(heff_evolve_fock(h1, 1, 0.1).mean_number - std::exp(-0.2)) <= 1e-12);
    CHECK(heff_evolve_fock(h1, 1, 0.1).mean_number == doctest::Approx(0.81873).epsilon(1e-5));
    CHECK(std::abs(heff_evolve_fock(EffectiveHamiltonian::make(1.0, 1.0, 3.0), 2, 0.0).decay_time -
                   0.2) <= 1e-12);
    CHECK(heff_evolve_fock(EffectiveHamiltonian::make(1.0, 1.0, 0.0), 0, 1.0).decay_time == inf);

    const cplx alpha(2.0, 0.0);
    const auto c = heff_evolve_coherent(h1, alpha, 0.5);
    CHECK(std::abs(c.mean_number - 4.0 * std::exp(-1.0)) <= 1e-12);
    CHECK(std::abs(c.decay_time - 0.5) <= 1e-12);
    const auto zero = heff_evolve_coherent(EffectiveHamiltonian::make(3.0, 0.5, 0.0), alpha, 0.7);
    CHECK(zero.weight == 1.0);
    CHECK(std::abs(zero.label - alpha * analytic_u(SystemMode{3.0}, 0.5, 0.7)) <= 1e-12);
    CHECK(std::abs(zero.decay_time - 2.0) <= 1e-12);
    const auto at0 = heff_evolve_coherent(h1, alpha, 0.0);
    CHECK(at0.weight == 1.0);
    CHECK(at0.label == alpha);

    CHECK_THROWS_AS(EffectiveHamiltonian::make(1.0, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(EffectiveHamiltonian::make(1.0, 1.0, -1.0), std::invalid_argument);
}

TEST_CASE("short-time agreement of the conditional state and H_eff")
{
    // slowly varying envelope u = e^{-gamma t / 2}
    for (double n_th : {0.0, 0.1, 0.5, 1.0})
    {
        const auto h = EffectiveHamiltonian::make(100.0, 1.0, n_th);
        for (double x : {0.001, 0.005, 0.01, 0.02})
        {
            const double conditional =
                paper_mean_number_T(1.0, std::exp(-0.5 * x), phi_closed(n_th, 1.0, x));
            const double heff = heff_evolve_coherent(h, 1.0, x).mean_number;
            CHECK(std::abs(conditional - heff) / heff <= 1e-3);
            // first-order terms cancel: the residual over the decayed part is O(x)
            CHECK(std::abs(conditional - heff) / (1.0 - heff) <= x);
        }
    }
}

TEST_CASE("superposition evolution under H_eff")
{
    const auto h = EffectiveHamiltonian::make(100.0, 1.0, 1.0);
    const cplx alpha(0.8, 0.3);

    const auto single = heff_evolve_superposition(h, CoherentSuperposition{{{1.0, alpha}}}, 0.04, 30);
    const auto c = heff_evolve_coherent(h, alpha, 0.04);
    const auto expect = coherent_amplitudes(c.label, 30);
    const Eigen::MatrixXcd rho = expect * expect.adjoint() / expect.squaredNorm();
    CHECK((single.state.rho - rho).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(single.pre_normalization_trace == doctest::Approx(c.weight * c.weight).epsilon(1e-14));
    CHECK_FALSE(single.outside_short_time);
    CHECK(single.state.trace() == doctest::Approx(1.0).epsilon(1e-14));

    const CoherentSuperposition cat{{{1.0, 2.0}, {1.0, -2.0}}};
    const auto at0 = heff_evolve_superposition(h, cat, 0.0, 40);
    const Eigen::VectorXcd psi = coherent_amplitudes(2.0, 40) + coherent_amplitudes(-2.0, 40);
    const Eigen::MatrixXcd cat_rho = psi * psi.adjoint() / psi.squaredNorm();
    CHECK((at0.state.rho - cat_rho).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(at0.pre_normalization_trace == doctest::Approx(1.0).epsilon(1e-14));

    CHECK(heff_evolve_superposition(h, cat, 0.2, 40).outside_short_time);
    CHECK_THROWS_AS(heff_evolve_superposition(h, cat, 0.01, 5), TruncationError);
    CHECK_THROWS_AS(heff_evolve_superposition(h, CoherentSuperposition{}, 0.01),
                    std::invalid_argument);
}

TEST_CASE("cat golden fixture")
{
    std::ifstream in(BOSON_DECAY_FIXTURES "/cat_heff.json");
    REQUIRE(in);
    const auto doc = nlohmann::json::parse(in);
    const double a = doc["alpha"];
    const auto h = EffectiveHamiltonian::make(doc["omega_b"], doc["gamma"], doc["n_th"]);
    const CoherentSuperposition cat{{{1.0, a}, {1.0, -a}}};
    for (const auto& p : doc["points"])
    {
        const double t = p["gamma_t"];
        const auto r = heff_evolve_superposition(h, cat, t, doc["n_max"].get<unsigned>());
        CHECK(r.interference_ratio ==
              doctest::Approx(p["interference_ratio"].get<double>()).epsilon(1e-10));
        CHECK(r.pre_normalization_trace ==
              doctest::Approx(p["pre_normalization_trace"].get<double>()).epsilon(1e-12));
        CHECK(r.state.mean_number() == doctest::Approx(p["mean_number"].get<double>()).epsilon(1e-10));
    }
}

TEST_CASE("thermal sampling")
{
    const auto bath = discretize_bath(SpectralDensitySpec::make(1.0, 2.0, 1.0), 5);
    const auto thermal = ThermalSpec::make(0.7, 2.0);
    CHECK_THROWS_AS(sample_thermal_bath(bath, ThermalSpec{0.0, inf}, 10, 1), std::domain_error);

    const auto a = sample_thermal_bath(bath, thermal, 100000, 77);
    const auto b = sample_thermal_bath(bath, thermal, 100000, 77);
    for (std::size_t k : {0u, 1u, 99999u})
        CHECK(a.sample(k) == b.sample(k));
    CHECK(a.sample(3) != a.sample(4));

    const auto moments = a.second_moments();
    const auto occ = bath_occupations(bath, thermal);
    for (std::size_t j = 0; j < 5; ++j)
        CHECK(std::abs(moments.mean[j] - occ[j]) <= 3.0 * moments.standard_error[j]);
    CHECK(a.passes_sanity_gate());

    // vacuum bath
    const auto cold = sample_thermal_bath(bath, ThermalSpec{inf, 0.0}, 10, 3);
    for (std::size_t k = 0; k < 10; ++k)
        for (auto l : cold.sample(k))
            CHECK(l == cplx{});

    // each quadrature has variance n_j / 2
    std::vector<double> re;
    for (std::size_t k = 0; k < 30000; ++k)
        re.push_back(a.sample(k)[0].real());
    double m2 = 0.0;
    for (double x : re)
        m2 += x * x;
    CHECK(m2 / re.size() == doctest::Approx(occ[0] / 2.0).epsilon(0.03));
}

TEST_CASE("samples do not depend on the worker count")
{
    const auto bath = discretize_bath(SpectralDensitySpec::make(1.0, 5.0, 2.0), 40);
    const auto thermal = ThermalSpec::make(0.3, 5.0);
    const ExactPropagator prop(SystemMode{5.0}, bath);
    std::vector<PropagatorCoefficients> coeffs;
    for (double t : {0.5, 1.0, 2.0})
        coeffs.push_back(prop.coefficients(t));
    std::vector<MonteCarloMoments> runs[2];
    ThermalSampleSet::SecondMoments second[2];
    const char* caps[] = {"1", "5"};
    for (int r = 0; r < 2; ++r)
    {
        EnvThreads env(caps[r]);
        const auto samples = sample_thermal_bath(bath, thermal, 3001, 11);
        runs[r] = mc_reduced_moments_series(0.5, bath, thermal, coeffs, samples);
        second[r] = samples.second_moments();
    }
    for (std::size_t i = 0; i < coeffs.size(); ++i)
    {
        CHECK(runs[0][i].moments.occupation == runs[1][i].moments.occupation);
        CHECK(runs[0][i].moments.mean_b == runs[1][i].moments.mean_b);
        CHECK(runs[0][i].occupation_standard_error == runs[1][i].occupation_standard_error);
    }
    CHECK(second[0].mean == second[1].mean);
}

TEST_CASE("Gaussian moment oracle")
{
    const auto bath = wwa_bath();
    const ExactPropagator prop(SystemMode{100.0}, bath);
    const auto thermal = unit_occupation();
    const cplx alpha(1.0, 0.5);

    const auto at0 = gaussian_moment_oracle(alpha, bath, thermal, prop.coefficients(0.0));
    CHECK(std::abs(at0.mean_b - alpha) < 1e-12);
    CHECK(at0.occupation == doctest::Approx(std::norm(alpha)).epsilon(1e-12));

    const ThermalSpec cold{inf, 0.0};
    for (double t : {0.5, 3.0})
    {
        const auto c = prop.coefficients(t);
        const auto m = gaussian_moment_oracle(alpha, bath, cold, c);
        CHECK(m.mean_b == alpha * c.u);
        CHECK(m.occupation == doctest::Approx(std::norm(alpha * c.u)).epsilon(1e-14));
    }

    // equilibration towards the resonant occupation
    const auto late = gaussian_moment_oracle(0.0, bath, thermal, prop.coefficients(8.0));
    MESSAGE("alpha = 0 occupation at gamma t = 8: " << late.occupation);
    CHECK(late.occupation == doctest::Approx(1.0).epsilon(3e-2));

    testgen::Gen g(12);
    for (int k = 0; k < 50; ++k)
    {
        const auto c = prop.coefficients(g.uniform(0.0, 6.0));
        const auto m = gaussian_moment_oracle(g.complex(3.0), bath, thermal, c);
        CHECK(m.occupation >= std::norm(m.mean_b));
    }
}

TEST_CASE("Monte Carlo moments")
{
    const auto bath = discretize_bath(SpectralDensitySpec::make(1.0, 100.0, 20.0), 400);
    const ExactPropagator prop(SystemMode{100.0}, bath);
    const auto thermal = unit_occupation();
    const cplx alpha(1.0, 0.0);

    // t = 0: mu = alpha for every sample
    const auto samples = sample_thermal_bath(bath, thermal, 10000, 2024);
    const auto at0 = mc_reduced_moments(alpha, bath, thermal, prop.coefficients(0.0), samples);
    CHECK(std::abs(at0.moments.mean_b - alpha) < 1e-12);
    CHECK(at0.moments.occupation == doctest::Approx(1.0).epsilon(1e-12));

    const auto c1 = prop.coefficients(1.0);
    const auto mc = mc_reduced_moments(alpha, bath, thermal, c1, samples);
    const auto exact = gaussian_moment_oracle(alpha, bath, thermal, c1);
    CHECK(std::abs(mc.moments.occupation - exact.occupation) <= 3.0 * mc.occupation_standard_error);
    CHECK(std::abs(mc.moments.mean_b - exact.mean_b) <= 3.0 * mc.mean_standard_error);

    const auto cold_samples = sample_thermal_bath(bath, ThermalSpec{inf, 0.0}, 50, 1);
    const auto cold = mc_reduced_moments(alpha, bath, ThermalSpec{inf, 0.0}, c1, cold_samples);
    CHECK(std::abs(cold.moments.mean_b - alpha * c1.u) < 1e-14);
    CHECK(cold.moments.occupation == doctest::Approx(std::norm(alpha * c1.u)).epsilon(1e-14));

    // standard error ~ 1 / sqrt(M)
    double se[3];
    const std::size_t sizes[] = {100, 1000, 10000};
    for (int i = 0; i < 3; ++i)
    {
        const auto s = sample_thermal_bath(bath, thermal, sizes[i], 99);
        se[i] = mc_reduced_moments(alpha, bath, thermal, c1, s).occupation_standard_error;
    }
    for (int i = 0; i < 2; ++i)
    {
        const double ratio = se[i] / se[i + 1];
        CHECK(ratio >= std::sqrt(10.0) / 1.5);
        CHECK(ratio <= std::sqrt(10.0) * 1.5);
    }

    CHECK_THROWS_AS(mc_reduced_moments(alpha, bath, ThermalSpec::make(1.0, 100.0), c1, samples),
                    std::invalid_argument);
}
