#include "horizonbench/arima.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>

#include "horizonbench/error.hpp"
#include "horizonbench/nelder_mead.hpp"

namespace horizonbench::arima {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// tanh(8) ~ 1 - 2.3e-7 keeps the optimizer strictly inside the unit region.
constexpr double kMaxUnconstrained = 8.0;

double mean_of(std::span<const double> x) {
    return std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
}

/// Partial autocorrelations -> polynomial coefficients a with 1 - sum a_j z^j
/// having all roots outside the unit circle (Durbin-Levinson recursion).
std::vector<double> partials_to_coefficients(std::span<const double> partials) {
    std::vector<double> a;
    a.reserve(partials.size());
    std::vector<double> prev;
    for (std::size_t k = 0; k < partials.size(); ++k) {
        prev = a;
        a.push_back(partials[k]);
        for (std::size_t j = 0; j < k; ++j) a[j] = prev[j] - partials[k] * prev[k - 1 - j];
    }
    return a;
}

std::vector<double> sample_pacf(std::span<const double> x, int max_lag) {
    const auto n = x.size();
    const double m = mean_of(x);
    std::vector<double> acov(static_cast<std::size_t>(max_lag) + 1, 0.0);
    for (int k = 0; k <= max_lag; ++k) {
        for (std::size_t t = static_cast<std::size_t>(k); t < n; ++t) {
            acov[static_cast<std::size_t>(k)] += (x[t] - m) * (x[t - static_cast<std::size_t>(k)] - m);
        }
        acov[static_cast<std::size_t>(k)] /= static_cast<double>(n);
    }
    std::vector<double> pacf;
    if (acov[0] <= 0.0) return std::vector<double>(static_cast<std::size_t>(max_lag), 0.0);
    // Durbin-Levinson on the sample autocovariances.
    std::vector<double> phi, prev;
    double v = acov[0];
    for (int k = 1; k <= max_lag; ++k) {
        double num = acov[static_cast<std::size_t>(k)];
        for (int j = 1; j < k; ++j) num -= phi[static_cast<std::size_t>(j - 1)] * acov[static_cast<std::size_t>(k - j)];
        double r = v > 0.0 ? num / v : 0.0;
        r = std::clamp(r, -0.95, 0.95);
        prev = phi;
        phi.push_back(r);
        for (int j = 1; j < k; ++j) {
            phi[static_cast<std::size_t>(j - 1)] = prev[static_cast<std::size_t>(j - 1)] - r * prev[static_cast<std::size_t>(k - j - 1)];
        }
        v *= (1.0 - r * r);
        pacf.push_back(r);
    }
    return pacf;
}

/// Harvey state-space form of a zero-mean ARMA(p, q) with unit innovation variance.
struct StateSpace {
    int r;
    std::vector<double> phi;  // padded to r
    std::vector<double> R;    // (1, theta_1, ..., theta_{r-1})
    Eigen::MatrixXd P0;
};

std::optional<StateSpace> make_state_space(std::span<const double> phi, std::span<const double> theta) {
    const int p = static_cast<int>(phi.size());
    const int q = static_cast<int>(theta.size());
    StateSpace ss;
    ss.r = std::max(p, q + 1);
    ss.phi.assign(static_cast<std::size_t>(ss.r), 0.0);
    std::copy(phi.begin(), phi.end(), ss.phi.begin());
    ss.R.assign(static_cast<std::size_t>(ss.r), 0.0);
    ss.R[0] = 1.0;
    std::copy(theta.begin(), theta.end(), ss.R.begin() + 1);

    const int r = ss.r;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(r, r);
    for (int i = 0; i < r; ++i) {
        T(i, 0) = ss.phi[static_cast<std::size_t>(i)];
        if (i + 1 < r) T(i, i + 1) = 1.0;
    }
    Eigen::VectorXd Rv = Eigen::Map<const Eigen::VectorXd>(ss.R.data(), r);
    Eigen::MatrixXd RR = Rv * Rv.transpose();
    // Stationary covariance: vec(P) = (I - T kron T)^{-1} vec(R R').
    Eigen::MatrixXd K = Eigen::MatrixXd::Identity(r * r, r * r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j)
            for (int k = 0; k < r; ++k)
                for (int l = 0; l < r; ++l) K(i * r + k, j * r + l) -= T(i, j) * T(k, l);
    Eigen::VectorXd rhs(r * r);
    for (int i = 0; i < r; ++i)
        for (int k = 0; k < r; ++k) rhs(i * r + k) = RR(i, k);
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(K);
    Eigen::VectorXd vecP = lu.solve(rhs);
    if (!vecP.allFinite()) return std::nullopt;
    ss.P0.resize(r, r);
    for (int i = 0; i < r; ++i)
        for (int k = 0; k < r; ++k) ss.P0(i, k) = vecP(i * r + k);
    ss.P0 = 0.5 * (ss.P0 + ss.P0.transpose());
    if (ss.P0(0, 0) <= 0.0) return std::nullopt;
    return ss;
}

struct FilterOutput {
    double sum_log_f = 0.0;
    double sum_sq = 0.0;
    std::size_t n = 0;
    Eigen::VectorXd predicted_state;  // a_{n+1|n}
    bool ok = true;
};

FilterOutput kalman_filter(const StateSpace& ss, std::span<const double> z) {
    const int r = ss.r;
    FilterOutput out;
    Eigen::VectorXd a = Eigen::VectorXd::Zero(r);
    Eigen::MatrixXd P = ss.P0;
    Eigen::MatrixXd TP(r, r), Pn(r, r);
    for (double obs : z) {
        const double F = P(0, 0);
        if (!(F > 0.0) || !std::isfinite(F)) {
            out.ok = false;
            return out;
        }
        const double v = obs - a(0);
        out.sum_log_f += std::log(F);
        out.sum_sq += v * v / F;
        // Measurement update.
        Eigen::VectorXd k = P.col(0) / F;
        a += k * v;
        P -= k * P.row(0);
        // Time update: a <- T a, P <- T P T' + R R'.
        Eigen::VectorXd an(r);
        for (int i = 0; i < r; ++i) an(i) = ss.phi[static_cast<std::size_t>(i)] * a(0) + (i + 1 < r ? a(i + 1) : 0.0);
        a = an;
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                TP(i, j) = ss.phi[static_cast<std::size_t>(i)] * P(0, j) + (i + 1 < r ? P(i + 1, j) : 0.0);
        for (int i = 0; i < r; ++i)
            for (int j = 0; j < r; ++j)
                Pn(i, j) = TP(i, 0) * ss.phi[static_cast<std::size_t>(j)] + (j + 1 < r ? TP(i, j + 1) : 0.0) +
                           ss.R[static_cast<std::size_t>(i)] * ss.R[static_cast<std::size_t>(j)];
        P = 0.5 * (Pn + Pn.transpose());
        ++out.n;
    }
    out.predicted_state = a;
    return out;
}

double css_objective(std::span<const double> z, std::span<const double> phi, std::span<const double> theta) {
    const std::size_t p = phi.size(), q = theta.size();
    std::vector<double> e(z.size(), 0.0);
    double ssq = 0.0;
    for (std::size_t t = p; t < z.size(); ++t) {
        double pred = 0.0;
        for (std::size_t i = 0; i < p; ++i) pred += phi[i] * z[t - 1 - i];
        for (std::size_t j = 0; j < q && j < t; ++j) pred += theta[j] * e[t - 1 - j];
        e[t] = z[t] - pred;
        ssq += e[t] * e[t];
    }
    const double m = static_cast<double>(z.size() - p);
    if (!(ssq > 0.0)) return -kInf;
    return 0.5 * m * std::log(ssq / m);
}

struct Decoded {
    std::vector<double> phi, theta;
    double mu = 0.0;
    double max_partial = 0.0;
};

Decoded decode(const std::vector<double>& x, int p, int q, bool intercept) {
    Decoded d;
    std::vector<double> partials_ar, partials_ma;
    for (int i = 0; i < p; ++i) {
        double r = std::tanh(std::clamp(x[static_cast<std::size_t>(i)], -kMaxUnconstrained, kMaxUnconstrained));
        partials_ar.push_back(r);
        d.max_partial = std::max(d.max_partial, std::abs(r));
    }
    for (int j = 0; j < q; ++j) {
        double r = std::tanh(std::clamp(x[static_cast<std::size_t>(p + j)], -kMaxUnconstrained, kMaxUnconstrained));
        partials_ma.push_back(r);
        d.max_partial = std::max(d.max_partial, std::abs(r));
    }
    d.phi = partials_to_coefficients(partials_ar);
    auto a = partials_to_coefficients(partials_ma);
    d.theta.resize(a.size());
    std::transform(a.begin(), a.end(), d.theta.begin(), [](double v) { return -v; });
    if (intercept) d.mu = x[static_cast<std::size_t>(p + q)];
    return d;
}

}  // namespace

std::string ArimaOrder::label() const {
    return "(" + std::to_string(p) + "," + std::to_string(d) + "," + std::to_string(q) + ")";
}

std::string ArimaFit::describe() const {
    std::ostringstream out;
    out.precision(6);
    out << "order=" << order.label() << " phi=[";
    for (std::size_t i = 0; i < params.phi.size(); ++i) out << (i ? "," : "") << params.phi[i];
    out << "] theta=[";
    for (std::size_t i = 0; i < params.theta.size(); ++i) out << (i ? "," : "") << params.theta[i];
    out << "] sigma2=" << params.sigma2;
    if (stats.has_intercept) out << " intercept=" << params.intercept;
    out << " loglik=" << stats.log_likelihood << " aicc=" << stats.aicc
        << " converged=" << (stats.converged ? "true" : "false");
    if (stats.near_boundary) out << " near_boundary=true";
    return out.str();
}

std::vector<double> difference(std::span<const double> values, int d) {
    if (d < 0) throw InvalidArgument("invalid differencing order " + std::to_string(d));
    if (values.size() <= static_cast<std::size_t>(d)) {
        throw InvalidArgument("series too short to difference " + std::to_string(d) + " times");
    }
    std::vector<double> out(values.begin(), values.end());
    for (int k = 0; k < d; ++k) {
        for (std::size_t t = 0; t + 1 < out.size(); ++t) out[t] = out[t + 1] - out[t];
        out.pop_back();
    }
    return out;
}

std::vector<double> integrate(std::span<const double> differenced, std::span<const double> head, int d) {
    if (d < 0) throw InvalidArgument("invalid differencing order " + std::to_string(d));
    if (head.size() != static_cast<std::size_t>(d)) throw InvalidArgument("integrate needs exactly d initial values");
    if (d == 0) return {differenced.begin(), differenced.end()};
    std::vector<double> head_diff = d > 1 ? difference(head, 1) : std::vector<double>{};
    std::vector<double> first = integrate(differenced, head_diff, d - 1);
    std::vector<double> out;
    out.reserve(first.size() + 1);
    out.push_back(head[0]);
    for (double step : first) out.push_back(out.back() + step);
    return out;
}

double kpss_statistic(std::span<const double> values) {
    const auto n = values.size();
    if (n < 2) throw InvalidArgument("insufficient data for stationarity test");
    const double m = mean_of(values);
    std::vector<double> e(n);
    for (std::size_t t = 0; t < n; ++t) e[t] = values[t] - m;
    double gamma0 = 0.0;
    for (double v : e) gamma0 += v * v;
    gamma0 /= static_cast<double>(n);
    if (gamma0 <= 0.0) return 0.0;

    const auto lags = static_cast<std::size_t>(std::floor(4.0 * std::pow(static_cast<double>(n) / 100.0, 0.25)));
    double s2 = gamma0;
    for (std::size_t s = 1; s <= lags && s < n; ++s) {
        double g = 0.0;
        for (std::size_t t = s; t < n; ++t) g += e[t] * e[t - s];
        g /= static_cast<double>(n);
        s2 += 2.0 * (1.0 - static_cast<double>(s) / static_cast<double>(lags + 1)) * g;
    }
    if (s2 <= 0.0) return 0.0;
    double partial = 0.0, eta = 0.0;
    for (double v : e) {
        partial += v;
        eta += partial * partial;
    }
    return eta / (static_cast<double>(n) * static_cast<double>(n) * s2);
}

int select_d(std::span<const double> values) {
    if (values.size() < 20) throw Error("insufficient data for stationarity test");
    for (int d = 0; d <= 1; ++d) {
        auto w = difference(values, d);
        if (kpss_statistic(w) < kKpssCritical5) return d;
    }
    return 2;
}

std::vector<std::complex<double>> polynomial_roots(std::span<const double> coefficients) {
    std::size_t degree = coefficients.size();
    while (degree > 0 && coefficients[degree - 1] == 0.0) --degree;
    if (degree <= 1) return {};
    const int k = static_cast<int>(degree - 1);
    // Companion matrix of the monic polynomial z^k + (c_{k-1}/c_k) z^{k-1} + ...
    Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(k, k);
    const double lead = coefficients[degree - 1];
    for (int i = 0; i < k; ++i) companion(0, i) = -coefficients[static_cast<std::size_t>(k - 1 - i)] / lead;
    for (int i = 1; i < k; ++i) companion(i, i - 1) = 1.0;
    Eigen::EigenSolver<Eigen::MatrixXd> solver(companion, false);
    std::vector<std::complex<double>> roots;
    for (int i = 0; i < k; ++i) roots.push_back(solver.eigenvalues()(i));
    return roots;
}

bool is_causal(std::span<const double> phi) {
    std::vector<double> c{1.0};
    for (double v : phi) c.push_back(-v);
    for (auto root : polynomial_roots(c)) {
        if (std::abs(root) <= 1.0) return false;
    }
    return true;
}

bool is_invertible(std::span<const double> theta) {
    std::vector<double> c{1.0};
    c.insert(c.end(), theta.begin(), theta.end());
    for (auto root : polynomial_roots(c)) {
        if (std::abs(root) <= 1.0) return false;
    }
    return true;
}

ArmaLikelihood arma_log_likelihood(std::span<const double> centered, std::span<const double> phi,
                                   std::span<const double> theta) {
    auto ss = make_state_space(phi, theta);
    if (!ss) return {-kInf, 0.0};
    auto f = kalman_filter(*ss, centered);
    if (!f.ok || f.n == 0) return {-kInf, 0.0};
    const double n = static_cast<double>(f.n);
    const double sigma2 = f.sum_sq / n;
    if (!(sigma2 > 0.0)) return {-kInf, 0.0};
    const double ll = -0.5 * (n * std::log(2.0 * std::numbers::pi * sigma2) + f.sum_log_f + n);
    return {ll, sigma2};
}

ArimaFit fit(std::span<const double> values, const ArimaOrder& order, const FitOptions& options) {
    const int p = order.p, d = order.d, q = order.q;
    if (p < 0 || d < 0 || q < 0 || d > 2) throw InvalidArgument("invalid ARIMA order " + order.label());
    if (values.size() < static_cast<std::size_t>(10 + p + q + d)) {
        throw Error("insufficient data: ARIMA" + order.label() + " needs " + std::to_string(10 + p + q + d) +
                    " values, got " + std::to_string(values.size()));
    }
    const bool intercept = options.include_intercept.value_or(d == 0);
    const std::vector<double> w = difference(values, d);
    const auto n = w.size();

    // Work on a standardized copy for conditioning; undo the scaling at the end.
    const double center = intercept ? mean_of(w) : 0.0;
    double scale = 0.0;
    for (double v : w) scale += (v - center) * (v - center);
    scale = std::sqrt(scale / static_cast<double>(n));
    if (!(scale > 0.0)) {
        throw Error("degenerate variance: differenced series is constant" +
                    (intercept ? " at " + std::to_string(center) : std::string()));
    }
    std::vector<double> base(n);
    for (std::size_t t = 0; t < n; ++t) base[t] = (w[t] - center) / scale;

    std::vector<double> z(n);
    auto centered = [&](double mu) {
        for (std::size_t t = 0; t < n; ++t) z[t] = base[t] - mu;
        return std::span<const double>(z);
    };

    std::vector<double> x0(static_cast<std::size_t>(p + q + (intercept ? 1 : 0)), 0.0);
    if (p > 0) {
        auto pacf = sample_pacf(base, p);
        for (int i = 0; i < p; ++i) x0[static_cast<std::size_t>(i)] = std::atanh(pacf[static_cast<std::size_t>(i)]);
    }

    NelderMeadOptions nm;
    nm.max_iterations = options.max_iterations;
    nm.f_tolerance = options.tolerance;

    auto css = [&](const std::vector<double>& x) {
        auto dec = decode(x, p, q, intercept);
        double v = css_objective(centered(dec.mu), dec.phi, dec.theta);
        return std::isfinite(v) ? v : kInf;
    };
    auto negloglik = [&](const std::vector<double>& x) {
        auto dec = decode(x, p, q, intercept);
        return -arma_log_likelihood(centered(dec.mu), dec.phi, dec.theta).log_likelihood;
    };

    std::vector<double> start = x0;
    if (!x0.empty()) {
        auto css_result = nelder_mead(css, x0, nm);
        if (std::isfinite(css_result.value)) start = css_result.x;
    }
    auto ml = nelder_mead(negloglik, start, nm);
    if (!ml.converged) {
        // One restart from the best vertex before giving up.
        auto again = nelder_mead(negloglik, ml.x, nm);
        again.iterations += ml.iterations;
        ml = again;
    }
    if (!ml.converged || !std::isfinite(ml.value)) {
        throw Error("fit failed: ARIMA" + order.label() + " likelihood did not converge within " +
                    std::to_string(options.max_iterations) + " iterations");
    }

    auto dec = decode(ml.x, p, q, intercept);
    auto lik = arma_log_likelihood(centered(dec.mu), dec.phi, dec.theta);

    ArimaFit result;
    result.order = order;
    result.params.phi = dec.phi;
    result.params.theta = dec.theta;
    result.params.sigma2 = lik.sigma2 * scale * scale;
    result.params.intercept = intercept ? center + scale * dec.mu : 0.0;
    result.stats.n_obs = static_cast<int>(n);
    result.stats.log_likelihood = lik.log_likelihood - static_cast<double>(n) * std::log(scale);
    const double k = p + q + 1 + (intercept ? 1 : 0);
    const double nn = static_cast<double>(n);
    result.stats.aicc = nn - k - 1.0 > 0.0
                            ? -2.0 * result.stats.log_likelihood + 2.0 * k + 2.0 * k * (k + 1.0) / (nn - k - 1.0)
                            : kInf;
    result.stats.iterations = ml.iterations;
    result.stats.converged = ml.converged;
    result.stats.has_intercept = intercept;
    result.stats.near_boundary = dec.max_partial > 0.999;

    // The parametrization keeps roots outside the unit circle; rounding at the
    // clamp can still land a root on it, which is reported rather than thrown.
    if (!is_causal(result.params.phi) || !is_invertible(result.params.theta)) result.stats.near_boundary = true;
    return result;
}

ArimaFit auto_fit(std::span<const double> values, const AutoOptions& options) {
    const int d = values.size() < 20 ? 0 : select_d(values);
    std::map<std::pair<int, int>, std::optional<ArimaFit>> tried;

    auto attempt = [&](int p, int q) -> const std::optional<ArimaFit>& {
        auto key = std::make_pair(p, q);
        if (auto it = tried.find(key); it != tried.end()) return it->second;
        std::optional<ArimaFit> result;
        const bool allowed = p >= 0 && q >= 0 && p <= options.p_max && q <= options.q_max &&
                             values.size() >= static_cast<std::size_t>(10 + p + q + d);
        if (allowed) {
            try {
                result = fit(values, ArimaOrder{p, d, q});
            } catch (const Error&) {
                result.reset();
            }
        }
        return tried.emplace(key, std::move(result)).first->second;
    };

    std::optional<ArimaFit> best;
    auto consider = [&](int p, int q) {
        const auto& f = attempt(p, q);
        if (f && std::isfinite(f->stats.aicc) && (!best || f->stats.aicc < best->stats.aicc)) {
            best = f;
            return true;
        }
        return false;
    };

    for (auto [p, q] : {std::pair{0, 0}, std::pair{1, 0}, std::pair{0, 1}, std::pair{2, 2}}) consider(p, q);
    if (!best) throw Error("auto fit failed: no candidate ARIMA model could be fitted");

    bool improved = true;
    while (improved) {
        improved = false;
        const int bp = best->order.p, bq = best->order.q;
        for (int dp = -1; dp <= 1 && !improved; ++dp) {
            for (int dq = -1; dq <= 1 && !improved; ++dq) {
                if (dp == 0 && dq == 0) continue;
                improved = consider(bp + dp, bq + dq);
            }
        }
    }
    return *best;
}

std::vector<double> psi_weights(std::span<const double> phi, std::span<const double> theta, int d, int count) {
    // Expand phi(L) (1 - L)^d into 1 - sum phistar_i L^i.
    std::vector<double> poly{1.0};
    for (double v : phi) poly.push_back(-v);
    for (int k = 0; k < d; ++k) {
        std::vector<double> next(poly.size() + 1, 0.0);
        for (std::size_t i = 0; i < poly.size(); ++i) {
            next[i] += poly[i];
            next[i + 1] -= poly[i];
        }
        poly = std::move(next);
    }
    std::vector<double> psi(static_cast<std::size_t>(std::max(count, 0)), 0.0);
    for (int j = 0; j < count; ++j) {
        double v = j == 0 ? 1.0 : (static_cast<std::size_t>(j) <= theta.size() ? theta[static_cast<std::size_t>(j - 1)] : 0.0);
        for (int i = 1; i <= j && static_cast<std::size_t>(i) < poly.size(); ++i) {
            v += -poly[static_cast<std::size_t>(i)] * psi[static_cast<std::size_t>(j - i)];
        }
        psi[static_cast<std::size_t>(j)] = v;
    }
    return psi;
}

PointForecast forecast_mean(const ArimaParams& params, const ArimaOrder& order,
                            std::span<const double> context, int horizon_days) {
    if (horizon_days <= 0) throw InvalidArgument("insufficient horizon");
    if (static_cast<int>(params.phi.size()) != order.p || static_cast<int>(params.theta.size()) != order.q) {
        throw InvalidArgument("parameters do not match order " + order.label());
    }
    if (context.size() <= static_cast<std::size_t>(order.d)) throw Error("insufficient context for ARIMA forecast");

    const auto w = difference(context, order.d);
    std::vector<double> z(w.size());
    for (std::size_t t = 0; t < w.size(); ++t) z[t] = w[t] - params.intercept;
    auto ss = make_state_space(params.phi, params.theta);
    if (!ss) throw Error("fit failed: non-stationary parameters");
    auto filtered = kalman_filter(*ss, z);
    if (!filtered.ok) throw Error("fit failed: degenerate state covariance");

    // Mean of the differenced series, then undo each differencing level.
    std::vector<double> w_future(static_cast<std::size_t>(horizon_days));
    Eigen::VectorXd a = filtered.predicted_state;
    const int r = ss->r;
    for (int h = 0; h < horizon_days; ++h) {
        w_future[static_cast<std::size_t>(h)] = params.intercept + a(0);
        Eigen::VectorXd an(r);
        for (int i = 0; i < r; ++i) an(i) = ss->phi[static_cast<std::size_t>(i)] * a(0) + (i + 1 < r ? a(i + 1) : 0.0);
        a = an;
    }
    std::vector<double> last(static_cast<std::size_t>(order.d));
    for (int k = 0; k < order.d; ++k) last[static_cast<std::size_t>(k)] = difference(context, k).back();
    PointForecast out;
    out.mean.resize(static_cast<std::size_t>(horizon_days));
    for (int h = 0; h < horizon_days; ++h) {
        double v = w_future[static_cast<std::size_t>(h)];
        for (int k = order.d - 1; k >= 0; --k) {
            v += last[static_cast<std::size_t>(k)];
            last[static_cast<std::size_t>(k)] = v;
        }
        out.mean[static_cast<std::size_t>(h)] = v;
    }

    auto psi = psi_weights(params.phi, params.theta, order.d, horizon_days);
    out.sd.resize(static_cast<std::size_t>(horizon_days));
    double acc = 0.0;
    for (int h = 0; h < horizon_days; ++h) {
        acc += psi[static_cast<std::size_t>(h)] * psi[static_cast<std::size_t>(h)];
        out.sd[static_cast<std::size_t>(h)] = std::sqrt(params.sigma2 * acc);
    }
    return out;
}

QuantileForecast predict_quantiles(const ArimaParams& params, const ArimaOrder& order,
                                   std::span<const double> context, int horizon_days, const Date& start_date) {
    auto point = forecast_mean(params, order, context, horizon_days);
    const auto h = static_cast<std::size_t>(horizon_days);
    std::vector<double> values(kNumQuantiles * h);
    for (std::size_t k = 0; k < kNumQuantiles; ++k) {
        for (std::size_t t = 0; t < h; ++t) {
            values[k * h + t] = std::max(0.0, point.mean[t] + kNormalQuantiles[k] * point.sd[t]);
        }
    }
    return QuantileForecast(start_date, h, std::move(values));
}

ForecastResult ArimaForecaster::forecast(const DailySeries& context, int horizon_days, std::uint64_t /*seed*/) {
    if (horizon_days <= 0) throw InvalidArgument("insufficient horizon");
    if (context.size() < 10) throw Error("insufficient context: ARIMA needs at least 10 values");
    auto values = context.values();
    ArimaFit model = auto_fit(values, options_);
    auto q = predict_quantiles(model.params, model.order, values, horizon_days, add_days(context.end_date(), 1));
    return {std::move(q), model.describe()};
}

}  // namespace horizonbench::arima
