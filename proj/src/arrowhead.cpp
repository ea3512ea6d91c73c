#include "boson_decay/arrowhead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "boson_decay/kernels.hpp"
#include "boson_decay/parallel.hpp"

namespace boson_decay {

SymmetricEigensystem dense_eigensystem(const Eigen::MatrixXd& symmetric)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric);
    if (solver.info() != Eigen::Success)
        throw std::runtime_error("self-adjoint eigensolver did not converge");
    return SymmetricEigensystem{solver.eigenvalues(), solver.eigenvectors()};
}

Eigen::MatrixXd arrowhead_matrix(double corner, std::span<const double> diag,
                                 std::span<const double> border)
{
    const Eigen::Index n = static_cast<Eigen::Index>(diag.size());
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n + 1, n + 1);
    a(0, 0) = corner;
    for (Eigen::Index i = 0; i < n; ++i)
    {
        a(i + 1, i + 1) = diag[i];
        a(0, i + 1) = border[i];
        a(i + 1, 0) = border[i];
    }
    return a;
}

bool is_unreduced_arrowhead(std::span<const double> diag, std::span<const double> border)
{
    if (diag.size() != border.size())
        return false;
    for (std::size_t i = 0; i < diag.size(); ++i)
    {
        if (border[i] == 0.0 || !std::isfinite(border[i]) || !std::isfinite(diag[i]))
            return false;
        if (i > 0 && !(diag[i] > diag[i - 1]))
            return false;
    }
    return true;
}

namespace {

// Root location: lambda = diag[origin] + tau.
struct SecularRoot
{
    std::size_t origin;
    double tau;
};

class SecularProblem
{
  public:
    SecularProblem(double corner, std::span<const double> diag, std::span<const double> border)
        : corner_(corner), diag_(diag), zsq_(border.size())
    {
        double norm = 0.0;
        for (std::size_t i = 0; i < border.size(); ++i)
        {
            zsq_[i] = border[i] * border[i];
            norm += zsq_[i];
        }
        border_norm_ = std::sqrt(norm);
    }

    std::size_t size() const { return diag_.size(); }

    // g(tau) = f(diag[origin] + tau); delta holds diag - diag[origin].
    double shifted(double tau, std::size_t origin, std::span<const double> delta) const
    {
        return (corner_ - diag_[origin]) - tau + kernels::secular_sum(zsq_, delta, tau);
    }

    SecularRoot solve(std::size_t r, std::vector<double>& delta) const
    {
        const std::size_t n = size();
        double margin = border_norm_ * 1e-3
                        + 4.0 * std::numeric_limits<double>::epsilon()
                              * (std::abs(corner_) + std::abs(diag_.front())
                                 + std::abs(diag_.back()) + border_norm_);
        std::size_t origin;
        double lo;
        double hi;
        if (r == 0)
        {
            origin = 0;
            lo = std::min(corner_, diag_.front()) - border_norm_ - margin - diag_.front();
            hi = 0.0;
        }
        else if (r == n)
        {
            origin = n - 1;
            lo = 0.0;
            hi = std::max(corner_, diag_.back()) + border_norm_ + margin - diag_.back();
        }
        else
        {
            const double left = diag_[r - 1];
            const double right = diag_[r];
            const double mid = left + 0.5 * (right - left);
            fill_delta(r, delta);
            if (shifted(mid - right, r, delta) > 0.0)
            {
                origin = r;
                lo = mid - right;
                hi = 0.0;
            }
            else
            {
                origin = r - 1;
                lo = 0.0;
                hi = mid - left;
            }
        }
        fill_delta(origin, delta);

        // f decreases between poles: positive left of the root.
        for (int iter = 0; iter < 2200; ++iter)
        {
            const double mid = lo + 0.5 * (hi - lo);
            if (mid <= lo || mid >= hi)
                break;
            if (shifted(mid, origin, delta) > 0.0)
                lo = mid;
            else
                hi = mid;
        }
        // Endpoints on a pole are excluded; prefer the interior one.
        double tau = lo + 0.5 * (hi - lo);
        if (tau == 0.0)
            tau = (lo == 0.0) ? hi : lo;
        return SecularRoot{origin, tau};
    }

  private:
    void fill_delta(std::size_t origin, std::vector<double>& delta) const
    {
        delta.resize(diag_.size());
        const double d0 = diag_[origin];
        for (std::size_t i = 0; i < diag_.size(); ++i)
            delta[i] = diag_[i] - d0;
    }

    double corner_;
    std::span<const double> diag_;
    std::vector<double> zsq_;
    double border_norm_ = 0.0;
};

}  // namespace

SymmetricEigensystem arrowhead_eigensystem(double corner, std::span<const double> diag,
                                           std::span<const double> border)
{
    if (diag.size() != border.size())
        throw std::invalid_argument("arrowhead: diag and border sizes differ");
    if (diag.empty())
    {
        SymmetricEigensystem one;
        one.values = Eigen::VectorXd::Constant(1, corner);
        one.vectors = RowMatrixXd::Ones(1, 1);
        return one;
    }
    if (!is_unreduced_arrowhead(diag, border))
        return dense_eigensystem(arrowhead_matrix(corner, diag, border));

    const std::size_t n = diag.size();
    const SecularProblem problem(corner, diag, border);

    std::vector<SecularRoot> roots(n + 1);
    parallel_for(n + 1, [&](std::size_t r) {
        thread_local std::vector<double> delta;
        roots[r] = problem.solve(r, delta);
    });

    // lambda_r - diag_i without cancellation
    auto gap = [&](std::size_t r, std::size_t i) {
        return (diag[roots[r].origin] - diag[i]) + roots[r].tau;
    };

    // Border weights consistent with the computed spectrum.
    std::vector<double> zhat(n);
    parallel_for(n, [&](std::size_t i) {
        double prod = std::abs(gap(i, i)) * std::abs(gap(i + 1, i));
        for (std::size_t k = 0; k < i; ++k)
            prod *= std::abs(gap(k, i)) / (diag[i] - diag[k]);
        for (std::size_t k = i + 1; k < n; ++k)
            prod *= std::abs(gap(k + 1, i)) / (diag[k] - diag[i]);
        zhat[i] = std::copysign(std::sqrt(prod), border[i]);
    });

    SymmetricEigensystem out;
    out.values.resize(static_cast<Eigen::Index>(n + 1));
    out.vectors.resize(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n + 1));
    parallel_for(n + 1, [&](std::size_t r) {
        const auto col = static_cast<Eigen::Index>(r);
        out.values(col) = diag[roots[r].origin] + roots[r].tau;
        double norm = 1.0;
        for (std::size_t i = 0; i < n; ++i)
        {
            const double x = zhat[i] / gap(r, i);
            out.vectors(static_cast<Eigen::Index>(i + 1), col) = x;
            norm += x * x;
        }
        const double scale = 1.0 / std::sqrt(norm);
        out.vectors(0, col) = scale;
        for (std::size_t i = 0; i < n; ++i)
            out.vectors(static_cast<Eigen::Index>(i + 1), col) *= scale;
    });
    return out;
}

}  // namespace boson_decay
