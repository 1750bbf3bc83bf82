#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "bellit/bell.hpp"
#include "bellit/lhv.hpp"

namespace bellit {

// Phases of the (d x 2)-port beam-splitter measurements: one d-vector of
// phases per (party, setting). Canonical gauge pins phi_0 = 0 for each
// (party, setting); adding a constant to one vector changes nothing.
struct PhaseConfig {
    int n = 0;
    int d = 0;
    std::vector<double> phases;  // [(party*2 + setting)*d + level]

    PhaseConfig() = default;
    PhaseConfig(int n_, int d_) : n(n_), d(d_), phases(size_t(n_) * 2 * d_, 0.0) {}
    double& at(int party, int setting, int level) {
        return phases[(size_t(party) * 2 + setting) * d + level];
    }
    double at(int party, int setting, int level) const {
        return phases[(size_t(party) * 2 + setting) * d + level];
    }
    // Shifts every (party, setting) vector so that phi_0 = 0.
    PhaseConfig gauge_fixed() const;

    std::string to_json() const;
    static PhaseConfig from_json(const std::string& text);
};

// Closed-form coincidence probability P(sum of outcomes = r | settings) for
// the n-qudit GHZ state measured with QFT + phase beam splitters.
double coincidence_probability(const PhaseConfig& pc, uint32_t setting_mask, int residue);

RealProbabilityTable coincidence_table(const PhaseConfig& pc);

// Bell value of f on the GHZ state at the given phases.
double quantum_value(const BellFunction& f, const PhaseConfig& pc);

// Precompiled evaluation used by the optimizer hot loop.
class CompiledForm {
  public:
    explicit CompiledForm(const ProbabilityForm& pf);
    double value(const PhaseConfig& pc) const;
    int n() const { return n_; }
    int d() const { return d_; }

  private:
    int n_, d_;
    double const_term_;
    // Fourier weights of each mean-zero row: cos/sin response per gap.
    std::vector<std::vector<double>> cosw_, sinw_;  // [mask][gap-1]
};

// --- state-vector oracle -------------------------------------------------

struct StateVector {
    int n = 0;
    int d = 0;
    std::vector<std::complex<double>> amplitudes;  // length d^n
};

StateVector ghz_state(int n, int d);
StateVector basis_state(int n, int d, const std::vector<int>& levels);

// Joint outcome probability |<outcomes| (U_qft U(phi))^{(x)n} |state>|^2.
double oracle_probability(const StateVector& state, const PhaseConfig& pc, uint32_t setting_mask,
                          const std::vector<int>& outcomes);

// Coincidence probability aggregated from the oracle's joint distribution;
// the independent cross-check of the closed form.
double oracle_coincidence(const StateVector& state, const PhaseConfig& pc, uint32_t setting_mask,
                          int residue);

// --- visibility and optimization -----------------------------------------

double critical_visibility(double lhv, double nl_psi, double nl_mix);

struct QuantumOptions {
    int restarts = 64;
    double tol = 1e-9;
    int max_evals = 20000;
    uint64_t seed = 1;
    int workers = 0;
    uint64_t lhv_budget = 100'000'000;
};

struct QuantumReport {
    double nl_psi = 0.0;
    double nl_mix = 0.0;
    double vc = 0.0;
    bool violation = false;
    Rational lhv;
    PhaseConfig best_phases;
    int restarts_used = 0;
    bool converged = false;

    std::string to_json() const;
};

// Multi-start derivative-free maximization of the GHZ value over the
// gauge-fixed phases (2n(d-1) parameters). Deterministic for a fixed seed
// and restart count, independent of worker count.
QuantumReport optimize_phases(const BellFunction& f, const QuantumOptions& opts = {});

// As above but with the classical bound supplied by the caller.
QuantumReport optimize_phases(const BellFunction& f, const Rational& lhv,
                              const QuantumOptions& opts);

// --- observable/projector reconstruction check ----------------------------

struct ProjectorCheck {
    bool pass = false;
    double max_residual = 0.0;
};

// Verifies, for prime d, that v_0 Pi_i is recovered from the powers of the
// label-valued observable X = sum v_i Pi_i over `trials` random orthonormal
// bases (plus the computational basis). Residual threshold 1e-10.
ProjectorCheck verify_projector_identity(int d, int trials, uint64_t seed = 1);

// --- generic Nelder-Mead, exposed for reuse in the search module ----------

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;  // minimized objective
    int evals = 0;
    bool converged = false;
};

NelderMeadResult nelder_mead(const std::function<double(const std::vector<double>&)>& objective,
                             std::vector<double> start, double step, double tol, int max_evals);

}  // namespace bellit
