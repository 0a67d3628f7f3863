#include "tailpca.h"

#include <cstring>
#include <new>
#include <string>

#include "tailpca/csv.hpp"
#include "tailpca/error.hpp"
#include "tailpca/simulate.hpp"
#include "tailpca/spectrum.hpp"
#include "tailpca/theory.hpp"

using tailpca::Index;

struct tailpca_matrix {
    tailpca::DataMatrix data;
};

struct tailpca_spectrum {
    tailpca::Spectrum spectrum;
};

struct tailpca_curve {
    tailpca::CriterionCurve curve;
};

struct tailpca_experiment {
    tailpca::ExperimentResult result;
};

namespace {

thread_local std::string g_last_error;

tailpca_status to_status(const tailpca::Error& e) {
    switch (e.code()) {
        case tailpca::ErrorCode::invalid_argument: return TAILPCA_ERR_ARGUMENT;
        case tailpca::ErrorCode::input: return TAILPCA_ERR_INPUT;
        case tailpca::ErrorCode::numeric: return TAILPCA_ERR_NUMERIC;
    }
    return TAILPCA_ERR_INTERNAL;
}

tailpca_status fail(tailpca_status status, const char* message) {
    g_last_error = message;
    return status;
}

template <typename Fn>
tailpca_status guarded(Fn&& fn) {
    try {
        fn();
        return TAILPCA_OK;
    } catch (const tailpca::Error& e) {
        g_last_error = e.what();
        return to_status(e);
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return TAILPCA_ERR_INTERNAL;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return TAILPCA_ERR_INTERNAL;
    }
}

tailpca::CriterionKind to_kind(tailpca_criterion kind) {
    switch (kind) {
        case TAILPCA_AIC: return tailpca::CriterionKind::aic_fixed;
        case TAILPCA_BIC: return tailpca::CriterionKind::bic_fixed;
        case TAILPCA_AIC_CIRC: return tailpca::CriterionKind::aic_circ;
        case TAILPCA_BIC_CIRC: return tailpca::CriterionKind::bic_circ;
        case TAILPCA_AIC_STAR: return tailpca::CriterionKind::aic_star;
        case TAILPCA_BIC_STAR: return tailpca::CriterionKind::bic_star;
    }
    tailpca::throw_invalid("unknown criterion kind");
}

tailpca_criterion from_kind(tailpca::CriterionKind kind) {
    switch (kind) {
        case tailpca::CriterionKind::aic_fixed: return TAILPCA_AIC;
        case tailpca::CriterionKind::bic_fixed: return TAILPCA_BIC;
        case tailpca::CriterionKind::aic_circ: return TAILPCA_AIC_CIRC;
        case tailpca::CriterionKind::bic_circ: return TAILPCA_BIC_CIRC;
        case tailpca::CriterionKind::aic_star: return TAILPCA_AIC_STAR;
        case tailpca::CriterionKind::bic_star: return TAILPCA_BIC_STAR;
    }
    return TAILPCA_AIC;
}

char* copy_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

}  // namespace

extern "C" {

const char* tailpca_version(void) { return "0.1.0"; }

const char* tailpca_last_error(void) { return g_last_error.c_str(); }

const char* tailpca_criterion_name(tailpca_criterion kind) {
    switch (kind) {
        case TAILPCA_AIC: return "aic";
        case TAILPCA_BIC: return "bic";
        case TAILPCA_AIC_CIRC: return "aic-circ";
        case TAILPCA_BIC_CIRC: return "bic-circ";
        case TAILPCA_AIC_STAR: return "aic-star";
        case TAILPCA_BIC_STAR: return "bic-star";
    }
    return "unknown";
}

tailpca_status tailpca_matrix_create(int64_t rows, int64_t cols, const double* row_major,
                                     tailpca_matrix** out) {
    if (!row_major || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        tailpca::Matrix values(rows, cols);
        for (Index i = 0; i < rows; ++i) {
            for (Index j = 0; j < cols; ++j) values(i, j) = row_major[i * cols + j];
        }
        *out = new tailpca_matrix{tailpca::DataMatrix(std::move(values))};
    });
}

tailpca_status tailpca_matrix_read_csv(const char* path, char delimiter,
                                       tailpca_matrix** out) {
    if (!path || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        auto result = tailpca::read_data_csv(path, delimiter == 0 ? ',' : delimiter);
        *out = new tailpca_matrix{std::move(result.data)};
    });
}

int64_t tailpca_matrix_rows(const tailpca_matrix* m) { return m ? m->data.rows() : 0; }

int64_t tailpca_matrix_cols(const tailpca_matrix* m) { return m ? m->data.cols() : 0; }

tailpca_status tailpca_matrix_get(const tailpca_matrix* m, int64_t row, int64_t col,
                                  double* out) {
    if (!m || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    if (row < 0 || row >= m->data.rows() || col < 0 || col >= m->data.cols()) {
        return fail(TAILPCA_ERR_ARGUMENT, "matrix index out of range");
    }
    *out = m->data.values()(row, col);
    return TAILPCA_OK;
}

tailpca_status tailpca_matrix_write_csv(const tailpca_matrix* m, const char* path) {
    if (!m || !path) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        std::FILE* file = std::fopen(path, "wb");
        if (!file) tailpca::throw_input(std::string("cannot open \"") + path + "\" for writing");
        const std::string text = tailpca::matrix_to_csv(m->data);
        const std::size_t written = std::fwrite(text.data(), 1, text.size(), file);
        std::fclose(file);
        if (written != text.size()) tailpca::throw_input("short write");
    });
}

tailpca_status tailpca_matrix_frechet_margins(const tailpca_matrix* m, tailpca_matrix** out,
                                              int64_t* n_constant_columns) {
    if (!m || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        auto result = tailpca::frechet_margin_transform(m->data);
        if (n_constant_columns) {
            *n_constant_columns = static_cast<int64_t>(result.constant_columns.size());
        }
        *out = new tailpca_matrix{std::move(result.data)};
    });
}

void tailpca_matrix_free(tailpca_matrix* m) { delete m; }

tailpca_status tailpca_angular_spectrum(const tailpca_matrix* m, int64_t k,
                                        tailpca_spectrum** out) {
    if (!m || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const auto sample = tailpca::select_extremes(m->data, k);
        const auto cov = tailpca::empirical_angular_covariance(sample);
        *out = new tailpca_spectrum{tailpca::eigenvalues_descending(cov)};
    });
}

tailpca_status tailpca_spectrum_create(const double* values, int64_t d, int64_t k,
                                       tailpca_spectrum** out) {
    if (!values || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        tailpca::Vector v(d);
        for (Index i = 0; i < d; ++i) v[i] = values[i];
        *out = new tailpca_spectrum{tailpca::Spectrum(std::move(v), d, k)};
    });
}

int64_t tailpca_spectrum_size(const tailpca_spectrum* s) { return s ? s->spectrum.size() : 0; }

int64_t tailpca_spectrum_k(const tailpca_spectrum* s) { return s ? s->spectrum.k() : 0; }

tailpca_status tailpca_spectrum_values(const tailpca_spectrum* s, double* out) {
    if (!s || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    for (Index i = 0; i < s->spectrum.size(); ++i) out[i] = s->spectrum[i];
    return TAILPCA_OK;
}

tailpca_status tailpca_spectrum_scree(const tailpca_spectrum* s, int64_t limit,
                                      double* scaled, double* increments) {
    if (!s) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const auto table = tailpca::scree(s->spectrum, limit);
        if (scaled) {
            std::memcpy(scaled, table.scaled.data(), table.scaled.size() * sizeof(double));
        }
        if (increments) {
            std::memcpy(increments, table.increments.data(),
                        table.increments.size() * sizeof(double));
        }
    });
}

void tailpca_spectrum_free(tailpca_spectrum* s) { delete s; }

tailpca_status tailpca_select_regime(int64_t d, int64_t k, tailpca_criterion* aic_kind,
                                     tailpca_criterion* bic_kind) {
    return guarded([&] {
        const auto pair = tailpca::select_regime(d, k);
        if (aic_kind) *aic_kind = from_kind(pair.aic);
        if (bic_kind) *bic_kind = from_kind(pair.bic);
    });
}

tailpca_status tailpca_default_q(int64_t d, int64_t k, int64_t* out) {
    if (!out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = tailpca::default_q(d, k); });
}

tailpca_status tailpca_criterion_value(tailpca_criterion kind, const tailpca_spectrum* s,
                                       int64_t k, int64_t p, double* out) {
    if (!s || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = tailpca::criterion_value(to_kind(kind), s->spectrum, k, p); });
}

tailpca_status tailpca_estimate_p(const tailpca_spectrum* s, int64_t k,
                                  tailpca_criterion kind, int64_t q, tailpca_curve** out) {
    if (!s || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        *out = new tailpca_curve{tailpca::estimate_p(s->spectrum, k, to_kind(kind), q)};
    });
}

int64_t tailpca_curve_p_hat(const tailpca_curve* c) { return c ? c->curve.p_hat : 0; }

int64_t tailpca_curve_q(const tailpca_curve* c) { return c ? c->curve.q : 0; }

tailpca_status tailpca_curve_kind(const tailpca_curve* c, tailpca_criterion* out) {
    if (!c || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    *out = from_kind(c->curve.kind);
    return TAILPCA_OK;
}

tailpca_status tailpca_curve_values(const tailpca_curve* c, double* out) {
    if (!c || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    std::memcpy(out, c->curve.values.data(), c->curve.values.size() * sizeof(double));
    return TAILPCA_OK;
}

tailpca_status tailpca_curve_to_csv(const tailpca_curve* c, char** out) {
    if (!c || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = copy_string(tailpca::curve_to_csv(c->curve)); });
}

tailpca_status tailpca_curve_to_json(const tailpca_curve* c, char** out) {
    if (!c || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = copy_string(tailpca::curve_to_json(c->curve)); });
}

void tailpca_curve_free(tailpca_curve* c) { delete c; }

tailpca_status tailpca_phi_c(double x, double c, double* out) {
    if (!out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = tailpca::phi_c(x, tailpca::AspectRatio(c)); });
}

tailpca_status tailpca_mp_density(double x, double c, double* out) {
    if (!out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = tailpca::mp_density(x, tailpca::AspectRatio(c)); });
}

tailpca_status tailpca_mp_point_mass(double c, double* out) {
    if (!out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = tailpca::mp_point_mass(tailpca::AspectRatio(c)); });
}

tailpca_status tailpca_mp_cdf(double x, double c, double* out) {
    if (!out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = tailpca::mp_cdf(x, tailpca::AspectRatio(c)); });
}

tailpca_status tailpca_mp_quantile(double alpha, double c, double* out) {
    if (!out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = tailpca::mp_quantile(alpha, tailpca::AspectRatio(c)); });
}

tailpca_status tailpca_mp_support(double c, double* lower, double* upper) {
    return guarded([&] {
        const tailpca::AspectRatio ratio(c);
        if (lower) *lower = ratio.support_lower();
        if (upper) *upper = ratio.support_upper();
    });
}

tailpca_status tailpca_distant_spike(double xi, double c, int* out) {
    if (!out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded(
        [&] { *out = tailpca::distant_spike_check(xi, tailpca::AspectRatio(c)) ? 1 : 0; });
}

tailpca_status tailpca_gap_condition(double xi, double c, double* margin, int* satisfied) {
    if (!margin) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const auto result = tailpca::gap_condition(xi, tailpca::AspectRatio(c));
        *margin = result.margin;
        if (satisfied) *satisfied = result.satisfied ? 1 : 0;
    });
}

tailpca_status tailpca_modified_gap_condition(double xi, double c, double* margin,
                                              int* satisfied) {
    if (!margin) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const auto result = tailpca::modified_gap_condition(xi, tailpca::AspectRatio(c));
        *margin = result.margin;
        if (satisfied) *satisfied = result.satisfied ? 1 : 0;
    });
}

tailpca_status tailpca_spike_forecast(double xi, double c, int* is_distant,
                                      double* predicted) {
    if (!predicted) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const auto forecast = tailpca::spike_forecast(xi, tailpca::AspectRatio(c));
        if (is_distant) *is_distant = forecast.is_distant ? 1 : 0;
        *predicted = forecast.predicted_empirical;
    });
}

tailpca_status tailpca_model_dims(const char* model_spec_json, int64_t* d, int64_t* n,
                                  int64_t* k_resolved) {
    if (!model_spec_json) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const auto spec = tailpca::ModelSpec::from_json(model_spec_json);
        if (d) *d = spec.d;
        if (n) *n = spec.n;
        if (k_resolved) *k_resolved = spec.resolved_k();
    });
}

tailpca_status tailpca_sample_model(const char* model_spec_json, tailpca_matrix** out) {
    if (!model_spec_json || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] {
        const auto spec = tailpca::ModelSpec::from_json(model_spec_json);
        const tailpca::ModelSampler sampler(spec);
        tailpca::Rng rng(tailpca::mix_seed(spec.seed, 0));
        *out = new tailpca_matrix{sampler.sample(rng)};
    });
}

tailpca_status tailpca_experiment_run(const char* model_spec_json, int64_t replications,
                                      const tailpca_criterion* kinds, int64_t n_kinds,
                                      int64_t q, int workers, tailpca_experiment** out) {
    if (!model_spec_json || !kinds || !out) {
        return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    }
    if (n_kinds < 1) return fail(TAILPCA_ERR_ARGUMENT, "need at least one criterion kind");
    return guarded([&] {
        const auto spec = tailpca::ModelSpec::from_json(model_spec_json);
        std::vector<tailpca::CriterionKind> kind_list;
        kind_list.reserve(static_cast<std::size_t>(n_kinds));
        for (int64_t i = 0; i < n_kinds; ++i) kind_list.push_back(to_kind(kinds[i]));
        const int64_t q_eff =
            q > 0 ? q : tailpca::default_q(spec.d, spec.resolved_k());
        *out = new tailpca_experiment{tailpca::run_experiment(
            spec, replications, kind_list, q_eff,
            workers < 1 ? 1u : static_cast<unsigned>(workers))};
    });
}

int64_t tailpca_experiment_replications(const tailpca_experiment* e) {
    return e ? e->result.replications : 0;
}

int64_t tailpca_experiment_n_kinds(const tailpca_experiment* e) {
    return e ? static_cast<int64_t>(e->result.kinds.size()) : 0;
}

int64_t tailpca_experiment_k(const tailpca_experiment* e) { return e ? e->result.k : 0; }

int64_t tailpca_experiment_q(const tailpca_experiment* e) { return e ? e->result.q : 0; }

tailpca_status tailpca_experiment_p_hats(const tailpca_experiment* e, int64_t kind_index,
                                         int64_t* out) {
    if (!e || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    if (kind_index < 0 || kind_index >= static_cast<int64_t>(e->result.kinds.size())) {
        return fail(TAILPCA_ERR_ARGUMENT, "kind index out of range");
    }
    const auto& values = e->result.p_hats[static_cast<std::size_t>(kind_index)];
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = values[i];
    return TAILPCA_OK;
}

tailpca_status tailpca_experiment_to_csv(const tailpca_experiment* e, char** out) {
    if (!e || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = copy_string(tailpca::experiment_to_csv(e->result)); });
}

tailpca_status tailpca_experiment_summary_json(const tailpca_experiment* e, char** out) {
    if (!e || !out) return fail(TAILPCA_ERR_ARGUMENT, "null pointer argument");
    return guarded([&] { *out = copy_string(tailpca::experiment_summary_json(e->result)); });
}

void tailpca_experiment_free(tailpca_experiment* e) { delete e; }

void tailpca_string_free(char* s) { delete[] s; }

}  // extern "C"
