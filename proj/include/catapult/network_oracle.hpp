#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "catapult/dataset.hpp"

namespace catapult {

// Full 2n-parameter SGD of F(Theta; s) = n^{-1/2} sum_r a_r phi(w_r s),
// the ground truth the reduced dynamics must close against, plus
// constructive initialisers that hit prescribed reduced coordinates.

struct NetworkParams {
    std::vector<double> w;
    std::vector<double> a;
    std::size_t n() const { return w.size(); }
};

struct LinearObservables {
    double mu;   // n^{-1/2} sum a_r w_r
    double lam;  // n^{-1}  sum (w_r^2 + a_r^2)
};

struct ReluObservables {
    double mu_plus, mu_minus;
    double lam_plus, lam_minus;
    // K(x, y) for sign pairs (+,+), (+,-), (-,+), (-,-)
    std::array<double, 4> ntk;
};

enum class InitStyle { Constant, Alternating };

LinearObservables observables_linear(const NetworkParams& params);
ReluObservables observables_relu(const NetworkParams& params);

// All neurons identical (up to the alternating sign pattern), solving
// a w = mu0/sqrt(n), a^2 + w^2 = lambda0 with w^2 >= a^2. Feasible iff
// lambda0 >= 2|mu0|/sqrt(n); throws InfeasibleInitError otherwise.
NetworkParams init_linear(std::size_t n, double mu0, double lambda0,
                          InitStyle style = InitStyle::Constant);

// n/2 neurons with w > 0 realising (mu0+, lambda0+), n/2 with w < 0
// realising (mu0-, lambda0-); |w_r| >= |a_r| for every r (w-biased).
NetworkParams init_relu_wbiased(std::size_t n, double mu0_plus, double mu0_minus,
                                double lambda0_plus, double lambda0_minus);

bool is_w_biased(const NetworkParams& params);

// w_r' = w_r - (eta/sqrt(n)) mu a_r s_i^2, a_r' = a_r - (eta/sqrt(n)) mu w_r s_i^2,
// all from pre-step values; mu_cache is the pre-step prediction.
void step_full_linear(NetworkParams& params, std::size_t i, const Dataset& ds, double mu_cache);

// Runs the full network and the reduced recursion on one index sequence and
// returns the max relative deviation in (mu, lam) over T steps.
double closure_check(const Dataset& ds, std::size_t n, double mu0, double lambda0,
                     std::uint64_t seed, long T, InitStyle style = InitStyle::Constant);

// Little-endian binary dump, header magic "CATP" + version + n.
void save_params(const NetworkParams& params, const std::string& path);
NetworkParams load_params(const std::string& path);

}  // namespace catapult
