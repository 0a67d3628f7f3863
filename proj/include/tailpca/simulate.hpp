#ifndef TAILPCA_SIMULATE_HPP
#define TAILPCA_SIMULATE_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tailpca/angular.hpp"
#include "tailpca/criteria.hpp"

namespace tailpca {

enum class ModelKind {
    directional,
    noisy_directional,
    spiked_angular_gaussian,
};

std::string_view to_string(ModelKind model);

/// Distribution of the latent factor entries in the directional models.
enum class VDist { normal, rademacher };

/// Parameters of one generative model run.
struct ModelSpec {
    ModelKind model = ModelKind::directional;
    Index d = 0;       ///< dimension, >= 2
    Index n = 0;       ///< sample count
    Index p_star = 0;  ///< true spike count, < d
    /// Spike sizes, descending, length p_star. For the directional models
    /// these must all exceed 1; for the spiked angular Gaussian they are the
    /// rank-one weights added on top of bulk_lambda.
    std::vector<double> spike_values;
    double bulk_lambda = 1.0;  ///< spiked angular Gaussian bulk level
    /// Extreme count (integer >= 1) or fraction of n in (0, 1).
    double k_spec = 0.0;
    std::uint64_t seed = 0;
    VDist v_dist = VDist::normal;

    void validate() const;
    /// Fraction specs resolve by round-half-up on fraction*n, floored at 3
    /// and capped at n-1; integer specs pass through.
    Index resolved_k() const;

    static ModelSpec from_json(const std::string& text);
    std::string to_json() const;
};

/// Deterministic per-stream generator. Streams are derived from a base seed
/// with mix_seed, so replications can run on any number of workers while
/// producing identical output.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform draw strictly inside (0, 1).
    double uniform();
    double normal() { return normal_(engine_); }
    /// -1/log(U); standard Frechet.
    double frechet() { return frechet_from_uniform(uniform()); }
    double rademacher() { return (engine_() & 1u) ? 1.0 : -1.0; }

    static double frechet_from_uniform(double u) { return -1.0 / std::log(u); }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_;
};

/// splitmix64 of (seed XOR stream); the child-seed map for replications.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// n i.i.d. standard Frechet draws, all positive.
Vector sample_frechet(Index n, Rng& rng);

/// Entrywise |N(0, 100/d)| noise vector used by the noisy directional model.
Vector sample_noise_vector(Index d, Rng& rng);

/// d x p matrix with orthonormal columns, Haar-distributed (QR of a Gaussian
/// matrix with the sign of the R diagonal fixed). Requires p <= d.
Matrix random_orthonormal_vectors(Index p, Index d, Rng& rng);

struct DirectionalDraw {
    DataMatrix data;
    Vector radii;  ///< the Frechet radii; row norms equal these exactly
};

/// Rows are (S^{1/2} V / ||S^{1/2} V||) * Z with S = diag(spike_values, 1, ..., 1),
/// V i.i.d. factors and Z standard Frechet independent of V.
DirectionalDraw sample_directional_with_radii(const ModelSpec& spec, Rng& rng);
DataMatrix sample_directional(const ModelSpec& spec, Rng& rng);

/// Directional sample plus entrywise-absolute Gaussian noise with variance
/// 100/d per coordinate.
DataMatrix sample_noisy_directional(const ModelSpec& spec, Rng& rng);

/// Rows are N * Z with N centered Gaussian whose covariance is the rank-p*
/// update sum_i spike_i v_i v_i^T + bulk * I built from random orthonormal
/// v_i. The v_i are derived from spec.seed and fixed for the whole
/// experiment; the passed rng only drives the per-row draws.
DataMatrix sample_spiked_angular_gaussian(const ModelSpec& spec, Rng& rng);

/// Prepares the per-model state (spike scales, eigenvector basis) once so
/// replications only draw randomness.
class ModelSampler {
public:
    explicit ModelSampler(const ModelSpec& spec);

    DataMatrix sample(Rng& rng) const;
    const ModelSpec& spec() const { return spec_; }
    /// Orthonormal spike directions (spiked angular Gaussian only).
    const Matrix& spike_basis() const { return spike_basis_; }

private:
    ModelSpec spec_;
    Vector direction_scale_;  ///< sqrt of the diagonal of S (directional models)
    Matrix spike_basis_;      ///< d x p* orthonormal columns (Gaussian model)
    Vector spike_shift_;      ///< sqrt(spike_i + bulk) - sqrt(bulk)
    double noise_sigma_ = 0.0;
};

/// Estimated spike locations per criterion over seeded replications.
struct ExperimentResult {
    ModelSpec spec;
    Index replications = 0;
    Index k = 0;
    Index q = 0;
    std::vector<CriterionKind> kinds;
    std::vector<std::vector<Index>> p_hats;  ///< [kind index][replication]
};

/// Runs the full pipeline (sample, select extremes, covariance, spectrum,
/// estimate) once per replication with child seed mix_seed(seed, r).
/// Output is bit-identical for a given spec regardless of worker count.
ExperimentResult run_experiment(const ModelSpec& spec, Index replications,
                                const std::vector<CriterionKind>& kinds, Index q,
                                unsigned workers = 1);

}  // namespace tailpca

#endif
