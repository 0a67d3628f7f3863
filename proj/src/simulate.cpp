#include "tailpca/simulate.hpp"

#include <atomic>
#include <cmath>
#include <thread>

#include <nlohmann/json.hpp>

#include "tailpca/error.hpp"
#include "tailpca/spectrum.hpp"

namespace tailpca {

namespace {

using json = nlohmann::ordered_json;

// Dedicated stream tag for the model-level randomness (the eigenvector basis
// of the spiked angular Gaussian model), distinct from replication streams.
constexpr std::uint64_t kModelStream = 0x6a09e667f3bcc909ULL;

ModelKind model_from_string(const std::string& name) {
    if (name == "directional") return ModelKind::directional;
    if (name == "noisy-directional") return ModelKind::noisy_directional;
    if (name == "spiked-angular-gaussian") return ModelKind::spiked_angular_gaussian;
    throw_input("unknown model \"" + name + "\"");
}

}  // namespace

std::string_view to_string(ModelKind model) {
    switch (model) {
        case ModelKind::directional: return "directional";
        case ModelKind::noisy_directional: return "noisy-directional";
        case ModelKind::spiked_angular_gaussian: return "spiked-angular-gaussian";
    }
    return "unknown";
}

double Rng::uniform() {
    std::uniform_real_distribution<double> dist(0.0, 1.0);
    for (;;) {
        const double u = dist(engine_);
        if (u > 0.0 && u < 1.0) return u;
    }
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t z = seed ^ stream;
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

void ModelSpec::validate() const {
    if (d < 2) throw_input("model needs d >= 2");
    if (n < 2) throw_input("model needs n >= 2");
    if (p_star < 0 || p_star >= d) throw_input("p_star must lie in [0, d)");
    if (static_cast<Index>(spike_values.size()) != p_star) {
        throw_input("spike_values must have length p_star");
    }
    for (std::size_t i = 0; i + 1 < spike_values.size(); ++i) {
        if (spike_values[i] < spike_values[i + 1]) {
            throw_input("spike_values must be descending");
        }
    }
    if (model == ModelKind::spiked_angular_gaussian) {
        if (!(bulk_lambda > 0.0)) throw_input("bulk_lambda must be positive");
        for (double v : spike_values) {
            if (!(v > bulk_lambda)) throw_input("spike_values must exceed bulk_lambda");
        }
    } else {
        for (double v : spike_values) {
            if (!(v > 1.0)) throw_input("directional spike_values must exceed 1");
        }
    }
    if (!(k_spec > 0.0)) throw_input("k must be positive");
    if (k_spec >= 1.0 && k_spec != std::floor(k_spec)) {
        throw_input("k must be an integer count or a fraction in (0, 1)");
    }
}

Index ModelSpec::resolved_k() const {
    if (k_spec < 1.0) {
        Index k = static_cast<Index>(std::floor(k_spec * static_cast<double>(n) + 0.5));
        k = std::max<Index>(k, 3);
        k = std::min<Index>(k, n - 1);
        return k;
    }
    return static_cast<Index>(k_spec);
}

ModelSpec ModelSpec::from_json(const std::string& text) {
    json parsed;
    try {
        parsed = json::parse(text);
    } catch (const json::exception& e) {
        throw_input(std::string("invalid model spec JSON: ") + e.what());
    }
    ModelSpec spec;
    try {
        spec.model = model_from_string(parsed.at("model").get<std::string>());
        spec.d = parsed.at("d").get<Index>();
        spec.n = parsed.at("n").get<Index>();
        spec.p_star = parsed.at("p_star").get<Index>();
        if (parsed.contains("spike_values")) {
            spec.spike_values = parsed.at("spike_values").get<std::vector<double>>();
        }
        if (parsed.contains("bulk_lambda")) {
            spec.bulk_lambda = parsed.at("bulk_lambda").get<double>();
        }
        spec.k_spec = parsed.at("k").get<double>();
        if (parsed.contains("seed")) spec.seed = parsed.at("seed").get<std::uint64_t>();
        if (parsed.contains("v_dist")) {
            const auto name = parsed.at("v_dist").get<std::string>();
            if (name == "normal") {
                spec.v_dist = VDist::normal;
            } else if (name == "rademacher") {
                spec.v_dist = VDist::rademacher;
            } else {
                throw_input("unknown v_dist \"" + name + "\"");
            }
        }
    } catch (const json::exception& e) {
        throw_input(std::string("invalid model spec JSON: ") + e.what());
    }
    spec.validate();
    return spec;
}

std::string ModelSpec::to_json() const {
    json out;
    out["model"] = std::string(to_string(model));
    out["d"] = d;
    out["n"] = n;
    out["p_star"] = p_star;
    out["spike_values"] = spike_values;
    if (model == ModelKind::spiked_angular_gaussian) out["bulk_lambda"] = bulk_lambda;
    out["k"] = k_spec;
    out["seed"] = seed;
    out["v_dist"] = v_dist == VDist::normal ? "normal" : "rademacher";
    return out.dump();
}

Vector sample_frechet(Index n, Rng& rng) {
    if (n < 1) throw_invalid("need at least one draw");
    Vector out(n);
    for (Index i = 0; i < n; ++i) out[i] = rng.frechet();
    return out;
}

Vector sample_noise_vector(Index d, Rng& rng) {
    const double sigma = std::sqrt(100.0 / static_cast<double>(d));
    Vector out(d);
    for (Index i = 0; i < d; ++i) out[i] = std::abs(sigma * rng.normal());
    return out;
}

Matrix random_orthonormal_vectors(Index p, Index d, Rng& rng) {
    if (p < 1 || p > d) throw_invalid("need 1 <= p <= d orthonormal vectors");
    Matrix gaussian(d, p);
    for (Index j = 0; j < p; ++j) {
        for (Index i = 0; i < d; ++i) gaussian(i, j) = rng.normal();
    }
    Eigen::HouseholderQR<Matrix> qr(gaussian);
    Matrix q = qr.householderQ() * Matrix::Identity(d, p);
    const Matrix r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
    for (Index j = 0; j < p; ++j) {
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    }
    return q;
}

ModelSampler::ModelSampler(const ModelSpec& spec) : spec_(spec) {
    spec_.validate();
    switch (spec_.model) {
        case ModelKind::noisy_directional:
            noise_sigma_ = std::sqrt(100.0 / static_cast<double>(spec_.d));
            [[fallthrough]];
        case ModelKind::directional: {
            direction_scale_ = Vector::Ones(spec_.d);
            for (Index i = 0; i < spec_.p_star; ++i) {
                direction_scale_[i] = std::sqrt(spec_.spike_values[static_cast<std::size_t>(i)]);
            }
            break;
        }
        case ModelKind::spiked_angular_gaussian: {
            if (spec_.p_star < 1) throw_input("spiked angular Gaussian needs p_star >= 1");
            Rng model_rng(mix_seed(spec_.seed, kModelStream));
            spike_basis_ = random_orthonormal_vectors(spec_.p_star, spec_.d, model_rng);
            spike_shift_ = Vector(spec_.p_star);
            const double sqrt_bulk = std::sqrt(spec_.bulk_lambda);
            for (Index i = 0; i < spec_.p_star; ++i) {
                spike_shift_[i] =
                    std::sqrt(spec_.spike_values[static_cast<std::size_t>(i)] + spec_.bulk_lambda) -
                    sqrt_bulk;
            }
            break;
        }
    }
}

DataMatrix ModelSampler::sample(Rng& rng) const {
    const Index n = spec_.n;
    const Index d = spec_.d;
    Matrix data(n, d);
    switch (spec_.model) {
        case ModelKind::directional:
        case ModelKind::noisy_directional: {
            Vector row(d);
            for (Index i = 0; i < n; ++i) {
                for (Index j = 0; j < d; ++j) {
                    const double v =
                        spec_.v_dist == VDist::normal ? rng.normal() : rng.rademacher();
                    row[j] = direction_scale_[j] * v;
                }
                const double norm = row.norm();
                const double radius = rng.frechet();
                data.row(i) = row.transpose() * (radius / norm);
                if (spec_.model == ModelKind::noisy_directional) {
                    for (Index j = 0; j < d; ++j) {
                        data(i, j) += std::abs(noise_sigma_ * rng.normal());
                    }
                }
            }
            break;
        }
        case ModelKind::spiked_angular_gaussian: {
            const double sqrt_bulk = std::sqrt(spec_.bulk_lambda);
            Vector g(d);
            for (Index i = 0; i < n; ++i) {
                for (Index j = 0; j < d; ++j) g[j] = rng.normal();
                Vector sample = sqrt_bulk * g;
                sample.noalias() +=
                    spike_basis_ * (spike_shift_.cwiseProduct(spike_basis_.transpose() * g));
                const double radius = rng.frechet();
                data.row(i) = sample.transpose() * radius;
            }
            break;
        }
    }
    return DataMatrix(std::move(data));
}

DirectionalDraw sample_directional_with_radii(const ModelSpec& spec, Rng& rng) {
    if (spec.model != ModelKind::directional) throw_invalid("spec is not a directional model");
    ModelSampler sampler(spec);
    DataMatrix data = sampler.sample(rng);
    Vector radii(data.rows());
    for (Index i = 0; i < data.rows(); ++i) radii[i] = data.values().row(i).norm();
    return DirectionalDraw{std::move(data), std::move(radii)};
}

DataMatrix sample_directional(const ModelSpec& spec, Rng& rng) {
    if (spec.model != ModelKind::directional) throw_invalid("spec is not a directional model");
    return ModelSampler(spec).sample(rng);
}

DataMatrix sample_noisy_directional(const ModelSpec& spec, Rng& rng) {
    if (spec.model != ModelKind::noisy_directional) {
        throw_invalid("spec is not a noisy directional model");
    }
    return ModelSampler(spec).sample(rng);
}

DataMatrix sample_spiked_angular_gaussian(const ModelSpec& spec, Rng& rng) {
    if (spec.model != ModelKind::spiked_angular_gaussian) {
        throw_invalid("spec is not a spiked angular Gaussian model");
    }
    return ModelSampler(spec).sample(rng);
}

ExperimentResult run_experiment(const ModelSpec& spec, Index replications,
                                const std::vector<CriterionKind>& kinds, Index q,
                                unsigned workers) {
    spec.validate();
    if (replications < 1) throw_invalid("need at least one replication");
    if (kinds.empty()) throw_invalid("need at least one criterion kind");

    const Index k = spec.resolved_k();
    for (const CriterionKind kind : kinds) {
        if (is_star(kind) ? spec.d <= k : k <= spec.d) throw_numeric("criterion regime mismatch");
        const Index limit = max_candidate(kind, spec.d, k);
        if (q < 1 || q > limit) throw_invalid("candidate bound q out of range for criterion");
    }

    const ModelSampler sampler(spec);
    ExperimentResult result;
    result.spec = spec;
    result.replications = replications;
    result.k = k;
    result.q = q;
    result.kinds = kinds;
    result.p_hats.assign(kinds.size(),
                         std::vector<Index>(static_cast<std::size_t>(replications), 0));

    std::vector<std::exception_ptr> failures(static_cast<std::size_t>(replications));
    std::atomic<Index> next{0};
    const auto worker = [&]() {
        for (;;) {
            const Index r = next.fetch_add(1);
            if (r >= replications) return;
            try {
                Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(r)));
                const DataMatrix data = sampler.sample(rng);
                const AngularSample extremes = select_extremes(data, k);
                const AngularCovariance cov = empirical_angular_covariance(extremes);
                const Spectrum spectrum = eigenvalues_descending(cov);
                for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
                    result.p_hats[ki][static_cast<std::size_t>(r)] =
                        estimate_p(spectrum, k, kinds[ki], q).p_hat;
                }
            } catch (const Error& e) {
                failures[static_cast<std::size_t>(r)] = std::make_exception_ptr(
                    Error(e.code(), "replication " + std::to_string(r) + ": " + e.what()));
            } catch (const std::exception& e) {
                failures[static_cast<std::size_t>(r)] = std::make_exception_ptr(
                    Error(ErrorCode::numeric,
                          "replication " + std::to_string(r) + ": " + e.what()));
            }
        }
    };

    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& thread : pool) thread.join();
    }

    for (const auto& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
    return result;
}

}  // namespace tailpca
