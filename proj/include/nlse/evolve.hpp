#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nlse/field.hpp"

namespace nlse {

struct EvolveConfig {
    double dt = 1e-3;
    double T = 1.0;
    int record_every = 10;          // steps between trace samples
    bool record_fields = false;
    double blowup_threshold = 1e6;  // sup-norm halt
};

struct EvolutionTrace {
    std::vector<double> t;
    std::vector<double> E;
    std::vector<double> M;
    std::vector<double> dist;       // empty unless a reference was supplied
    std::vector<ComplexField> fields;
    bool blowup = false;
    ComplexField final_state;
};

/// One Strang step: exact nonlinear phase rotation (half), exact linear flow
/// in Fourier space (full), nonlinear half again. Both sub-flows conserve the
/// discrete mass.
ComplexField step(const ComplexField& u, double dt, const Nonlinearity& nl);

/// Iterates step(), recording E, M and (when reference is given) the orbit
/// distance at the configured cadence. Halts with a partial trace on blowup.
EvolutionTrace evolve(const ComplexField& u0, const Nonlinearity& nl,
                      const EvolveConfig& cfg,
                      const ProfileSolution* reference = nullptr);

struct Perturbation {
    std::string kind; // "amplitude", "phase_ramp", "noise"
    double eps = 0;
};

struct StabilityEntry {
    std::string kind;
    double eps = 0;
    double initial_dist = 0;
    double sup_dist = 0;
    double ratio = 0;            // sup / initial; NaN when initial ~ 0
    bool expected_growth = false;
};

struct StabilityReport {
    double lambda = 0;
    double omega = 0;
    double T = 0;
    std::vector<StabilityEntry> entries;
};

/// Perturbs the soliton of mass lambda (amplitude scaling, phase ramp, or
/// seeded even H^1 noise), evolves to T and reports the sup-over-time orbit
/// distance per perturbation. Phase ramps boost the soliton out of the
/// unboosted orbit, so their growth is flagged as expected.
StabilityReport stability_experiment(const Nonlinearity& nl, double lambda,
                                     const std::vector<Perturbation>& perturbations,
                                     double T, const Grid& grid, double dt,
                                     std::uint64_t seed);

} // namespace nlse
