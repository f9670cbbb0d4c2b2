#include "catapult/network_oracle.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>

#include "catapult/dynamics_linear.hpp"
#include "catapult/errors.hpp"

namespace catapult {

LinearObservables observables_linear(const NetworkParams& params) {
    double prod = 0.0, sq = 0.0;
    for (std::size_t r = 0; r < params.n(); ++r) {
        prod += params.a[r] * params.w[r];
        sq += params.w[r] * params.w[r] + params.a[r] * params.a[r];
    }
    const double n = static_cast<double>(params.n());
    return {prod / std::sqrt(n), sq / n};
}

ReluObservables observables_relu(const NetworkParams& params) {
    double mu_p = 0.0, mu_m = 0.0, lam_p = 0.0, lam_m = 0.0;
    for (std::size_t r = 0; r < params.n(); ++r) {
        const double w = params.w[r], a = params.a[r];
        if (w > 0.0) {
            mu_p += a * w;
            lam_p += w * w + a * a;
        } else if (w < 0.0) {
            mu_m += a * (-w);
            lam_m += w * w + a * a;
        }
        // w == 0: sigma'(0) := 0, the neuron is counted by neither channel
    }
    const double n = static_cast<double>(params.n());
    ReluObservables obs;
    obs.mu_plus = mu_p / std::sqrt(n);
    obs.mu_minus = mu_m / std::sqrt(n);
    obs.lam_plus = lam_p / n;
    obs.lam_minus = lam_m / n;
    obs.ntk = {obs.lam_plus, 0.0, 0.0, obs.lam_minus};
    return obs;
}

namespace {

// roots of x^2 - P x + Q^2 = 0 as (w^2, a^2) with w^2 the larger root
std::pair<double, double> balanced_split(double P, double Q, const char* what) {
    const double disc = P * P - 4.0 * Q * Q;
    if (disc < 0.0)
        throw InfeasibleInitError(std::string(what) + ": requires P^2 >= 4 Q^2, got P=" +
                                  std::to_string(P) + " Q=" + std::to_string(Q));
    const double root = std::sqrt(disc);
    return {0.5 * (P + root), 0.5 * (P - root)};
}

}  // namespace

NetworkParams init_linear(std::size_t n, double mu0, double lambda0, InitStyle style) {
    if (n < 1) throw InfeasibleInitError("n must be >= 1");
    const double q = mu0 / std::sqrt(static_cast<double>(n));
    if (lambda0 < 2.0 * std::fabs(q))
        throw InfeasibleInitError("lambda0 < 2|mu0|/sqrt(n)");
    const auto [w2, a2] = balanced_split(lambda0, q, "init_linear");
    const double w = std::sqrt(w2);
    const double a = w > 0.0 ? q / w : 0.0;
    NetworkParams params{std::vector<double>(n, w), std::vector<double>(n, a)};
    if (style == InitStyle::Alternating) {
        // flipping (w_r, a_r) -> (-w_r, -a_r) preserves both observables
        for (std::size_t r = 1; r < n; r += 2) {
            params.w[r] = -params.w[r];
            params.a[r] = -params.a[r];
        }
    }
    (void)a2;
    return params;
}

NetworkParams init_relu_wbiased(std::size_t n, double mu0_plus, double mu0_minus,
                                double lambda0_plus, double lambda0_minus) {
    if (n < 2 || n % 2 != 0) throw InfeasibleInitError("w-biased construction needs even n >= 2");
    const double sqrt_n = std::sqrt(static_cast<double>(n));

    NetworkParams params{std::vector<double>(n), std::vector<double>(n)};
    const auto fill_group = [&](std::size_t begin, double mu0, double lambda0, double sign,
                                const char* what) {
        const double P = 2.0 * lambda0;
        const double Q = 2.0 * mu0 / sqrt_n;
        const auto [w2, a2] = balanced_split(P, Q, what);
        (void)a2;
        const double w_abs = std::sqrt(w2);
        const double a = w_abs > 0.0 ? Q / w_abs : 0.0;
        for (std::size_t r = begin; r < begin + n / 2; ++r) {
            params.w[r] = sign * w_abs;
            params.a[r] = a;
        }
    };
    fill_group(0, mu0_plus, lambda0_plus, +1.0, "init_relu_wbiased(+)");
    fill_group(n / 2, mu0_minus, lambda0_minus, -1.0, "init_relu_wbiased(-)");
    return params;
}

bool is_w_biased(const NetworkParams& params) {
    for (std::size_t r = 0; r < params.n(); ++r)
        if (std::fabs(params.w[r]) < std::fabs(params.a[r])) return false;
    return true;
}

void step_full_linear(NetworkParams& params, std::size_t i, const Dataset& ds, double mu_cache) {
    const double scale = ds.eta() / std::sqrt(static_cast<double>(params.n())) * mu_cache * ds.s2(i);
    for (std::size_t r = 0; r < params.n(); ++r) {
        const double w_old = params.w[r], a_old = params.a[r];
        params.w[r] = w_old - scale * a_old;
        params.a[r] = a_old - scale * w_old;
    }
}

double closure_check(const Dataset& ds, std::size_t n, double mu0, double lambda0,
                     std::uint64_t seed, long T, InitStyle style) {
    NetworkParams params = init_linear(n, mu0, lambda0, style);
    LinearState reduced{0, mu0, lambda0};
    RngStream rng(seed, 0);
    IndexSampler sample(ds);

    double worst = 0.0;
    for (long t = 0; t < T; ++t) {
        const std::size_t i = sample(rng);
        const double mu_cache = observables_linear(params).mu;
        step_full_linear(params, i, ds, mu_cache);
        reduced = step_linear(reduced, i, ds, static_cast<double>(n));

        const auto obs = observables_linear(params);
        if (!std::isfinite(obs.mu) || !std::isfinite(reduced.mu)) break;  // both paths diverged
        const double dmu =
            std::fabs(obs.mu - reduced.mu) / std::max({std::fabs(reduced.mu), std::fabs(obs.mu), 1e-300});
        const double dlam =
            std::fabs(obs.lam - reduced.lam) / std::max({std::fabs(reduced.lam), std::fabs(obs.lam), 1e-300});
        worst = std::max({worst, dmu, dlam});
    }
    return worst;
}

namespace {
constexpr char kMagic[4] = {'C', 'A', 'T', 'P'};
constexpr std::uint32_t kDumpVersion = 1;
}  // namespace

void save_params(const NetworkParams& params, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open " + path + " for writing");
    out.write(kMagic, 4);
    const std::uint32_t version = kDumpVersion;
    const std::uint64_t n = params.n();
    out.write(reinterpret_cast<const char*>(&version), sizeof version);
    out.write(reinterpret_cast<const char*>(&n), sizeof n);
    out.write(reinterpret_cast<const char*>(params.w.data()), sizeof(double) * params.n());
    out.write(reinterpret_cast<const char*>(params.a.data()), sizeof(double) * params.n());
    if (!out) throw Error("short write to " + path);
}

NetworkParams load_params(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path);
    char magic[4];
    std::uint32_t version = 0;
    std::uint64_t n = 0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), sizeof version);
    in.read(reinterpret_cast<char*>(&n), sizeof n);
    if (!in || std::memcmp(magic, kMagic, 4) != 0 || version != kDumpVersion)
        throw Error("bad params dump header in " + path);
    NetworkParams params{std::vector<double>(n), std::vector<double>(n)};
    in.read(reinterpret_cast<char*>(params.w.data()), sizeof(double) * n);
    in.read(reinterpret_cast<char*>(params.a.data()), sizeof(double) * n);
    if (!in) throw Error("truncated params dump " + path);
    return params;
}

}  // namespace catapult
