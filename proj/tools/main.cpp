// tailpca command line tool. Talks to the library exclusively through the
// C API in tailpca.h; everything here is argument handling and formatting.

#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <tailpca.h>

namespace {

using json = nlohmann::ordered_json;

constexpr int kExitOk = 0;
constexpr int kExitInput = 2;
constexpr int kExitNumeric = 3;

int exit_code_for(tailpca_status status) {
    switch (status) {
        case TAILPCA_OK: return kExitOk;
        case TAILPCA_ERR_ARGUMENT:
        case TAILPCA_ERR_INPUT: return kExitInput;
        case TAILPCA_ERR_NUMERIC: return kExitNumeric;
        case TAILPCA_ERR_INTERNAL: return 1;
    }
    return 1;
}

// Thrown by the helpers below; carries the process exit code.
struct CommandError {
    int code;
    std::string message;
};

void check(tailpca_status status) {
    if (status != TAILPCA_OK) {
        throw CommandError{exit_code_for(status), tailpca_last_error()};
    }
}

[[noreturn]] void fail_input(const std::string& message) {
    throw CommandError{kExitInput, message};
}

std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

std::string format_ratio(double v) {
    char buffer[32];
    std::snprintf(buffer, sizeof(buffer), "%.4f", v);
    return buffer;
}

std::uint64_t fnv1a64(const std::string& text) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : text) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

std::string hash_hex(std::uint64_t hash) {
    char buffer[24];
    std::snprintf(buffer, sizeof(buffer), "0x%016" PRIx64, hash);
    return buffer;
}

void write_output(const std::string& path, const std::string& content) {
    if (path == "-") {
        std::cout << content;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) fail_input("cannot open \"" + path + "\" for writing");
    out << content;
    if (!out) fail_input("failed writing \"" + path + "\"");
}

struct KSpec {
    double raw;      // integer count or fraction in (0,1)
    bool fraction;
};

KSpec parse_k_spec(const std::string& text) {
    char* end = nullptr;
    const double value = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0' || !(value > 0.0)) {
        fail_input("invalid k \"" + text + "\"");
    }
    if (value < 1.0) return KSpec{value, true};
    if (value != static_cast<double>(static_cast<long long>(value))) {
        fail_input("k must be an integer count or a fraction in (0, 1)");
    }
    return KSpec{value, false};
}

std::int64_t resolve_k(const KSpec& spec, std::int64_t n) {
    if (!spec.fraction) return static_cast<std::int64_t>(spec.raw);
    // round half up on fraction*n
    return static_cast<std::int64_t>(std::floor(spec.raw * static_cast<double>(n) + 0.5));
}

std::vector<std::string> split_commas(const std::string& text) {
    std::vector<std::string> parts;
    std::stringstream stream(text);
    std::string item;
    while (std::getline(stream, item, ',')) {
        if (!item.empty()) parts.push_back(item);
    }
    return parts;
}

std::string regime_label(tailpca_criterion kind) {
    return (kind == TAILPCA_AIC_STAR || kind == TAILPCA_BIC_STAR) ? "star" : "fixed";
}

tailpca_criterion parse_criterion(const std::string& name) {
    static const std::vector<std::pair<std::string, tailpca_criterion>> table = {
        {"aic", TAILPCA_AIC},           {"bic", TAILPCA_BIC},
        {"aic-circ", TAILPCA_AIC_CIRC}, {"bic-circ", TAILPCA_BIC_CIRC},
        {"aic-star", TAILPCA_AIC_STAR}, {"bic-star", TAILPCA_BIC_STAR},
    };
    for (const auto& [label, kind] : table) {
        if (label == name) return kind;
    }
    fail_input("unknown criterion \"" + name + "\"");
}

// RAII for the C handles used below.
struct MatrixHandle {
    tailpca_matrix* ptr = nullptr;
    ~MatrixHandle() { tailpca_matrix_free(ptr); }
};
struct SpectrumHandle {
    tailpca_spectrum* ptr = nullptr;
    ~SpectrumHandle() { tailpca_spectrum_free(ptr); }
};
struct CurveHandle {
    tailpca_curve* ptr = nullptr;
    ~CurveHandle() { tailpca_curve_free(ptr); }
};
struct ExperimentHandle {
    tailpca_experiment* ptr = nullptr;
    ~ExperimentHandle() { tailpca_experiment_free(ptr); }
};
struct StringHandle {
    char* ptr = nullptr;
    ~StringHandle() { tailpca_string_free(ptr); }
    std::string str() const { return ptr ? std::string(ptr) : std::string(); }
};

void echo_config(const std::string& hash) {
    std::cerr << "tailpca: config " << hash << "\n";
}

// ---------------------------------------------------------------- estimate

struct EstimateOptions {
    std::string input;
    std::string k;
    std::string k_grid;
    std::int64_t q = 0;  // 0 = per-regime default
    std::string criterion = "auto";
    bool frechet_margins = false;
    std::string delimiter = ",";
    std::string out = "-";
    std::string format = "csv";
};

int run_estimate(const EstimateOptions& opt) {
    if (opt.k.empty() == opt.k_grid.empty()) {
        fail_input("estimate needs exactly one of --k or --k-grid");
    }
    if (opt.delimiter.size() != 1) fail_input("delimiter must be a single character");

    const std::string config = "estimate;input=" + opt.input + ";k=" + opt.k +
                               ";k-grid=" + opt.k_grid + ";q=" + std::to_string(opt.q) +
                               ";criterion=" + opt.criterion +
                               ";frechet=" + (opt.frechet_margins ? "1" : "0") +
                               ";delimiter=" + opt.delimiter + ";format=" + opt.format;
    const std::string hash = hash_hex(fnv1a64(config));
    echo_config(hash);

    MatrixHandle raw;
    check(tailpca_matrix_read_csv(opt.input.c_str(), opt.delimiter[0], &raw.ptr));
    MatrixHandle transformed;
    const tailpca_matrix* data = raw.ptr;
    if (opt.frechet_margins) {
        std::int64_t constant_columns = 0;
        check(tailpca_matrix_frechet_margins(raw.ptr, &transformed.ptr, &constant_columns));
        if (constant_columns > 0) {
            std::cerr << "tailpca: warning: " << constant_columns
                      << " constant column(s); their transformed margins are constant\n";
        }
        data = transformed.ptr;
    }
    const std::int64_t n = tailpca_matrix_rows(data);
    const std::int64_t d = tailpca_matrix_cols(data);

    std::vector<std::int64_t> ks;
    for (const std::string& item :
         opt.k_grid.empty() ? std::vector<std::string>{opt.k} : split_commas(opt.k_grid)) {
        ks.push_back(resolve_k(parse_k_spec(item), n));
    }

    const bool auto_regime = opt.criterion == "auto";
    tailpca_criterion explicit_kind = TAILPCA_AIC;
    if (!auto_regime) explicit_kind = parse_criterion(opt.criterion);

    std::string csv;
    json report;
    if (opt.format == "csv") {
        csv = "# tailpca config=" + hash + "\n";
        csv += auto_regime ? "k,c,regime,aic_kind,aic_p_hat,bic_kind,bic_p_hat\n"
                           : "k,c,regime,kind,p_hat\n";
    } else {
        report["config"] = hash;
        report["command"] = "estimate";
        report["n"] = n;
        report["d"] = d;
        report["frechet_margins"] = opt.frechet_margins;
        report["rows"] = json::array();
    }

    for (const std::int64_t k : ks) {
        SpectrumHandle spectrum;
        check(tailpca_angular_spectrum(data, k, &spectrum.ptr));

        std::vector<tailpca_criterion> kinds;
        if (auto_regime) {
            tailpca_criterion aic_kind = TAILPCA_AIC;
            tailpca_criterion bic_kind = TAILPCA_BIC;
            check(tailpca_select_regime(d, k, &aic_kind, &bic_kind));
            kinds = {aic_kind, bic_kind};
        } else {
            kinds = {explicit_kind};
        }

        std::int64_t q = opt.q;
        if (q <= 0) check(tailpca_default_q(d, k, &q));

        const double c = static_cast<double>(d) / static_cast<double>(k);
        const std::string regime = regime_label(kinds.front());

        std::vector<CurveHandle> curves(kinds.size());
        for (std::size_t i = 0; i < kinds.size(); ++i) {
            check(tailpca_estimate_p(spectrum.ptr, k, kinds[i], q, &curves[i].ptr));
        }

        if (opt.format == "csv") {
            csv += std::to_string(k) + "," + format_ratio(c) + "," + regime;
            for (std::size_t i = 0; i < kinds.size(); ++i) {
                csv += std::string(",") + tailpca_criterion_name(kinds[i]) + "," +
                       std::to_string(tailpca_curve_p_hat(curves[i].ptr));
            }
            csv += "\n";
        } else {
            json row;
            row["k"] = k;
            row["c"] = c;
            row["regime"] = regime;
            row["estimates"] = json::array();
            for (std::size_t i = 0; i < kinds.size(); ++i) {
                StringHandle curve_json;
                check(tailpca_curve_to_json(curves[i].ptr, &curve_json.ptr));
                row["estimates"].push_back(json::parse(curve_json.str()));
            }
            report["rows"].push_back(std::move(row));
        }
    }

    write_output(opt.out, opt.format == "csv" ? csv : report.dump(2) + "\n");
    return kExitOk;
}

// ------------------------------------------------------------------- scree

struct ScreeOptions {
    std::string input;
    std::string k;
    bool frechet_margins = false;
    std::string delimiter = ",";
    std::string out;
};

int run_scree(const ScreeOptions& opt) {
    if (opt.delimiter.size() != 1) fail_input("delimiter must be a single character");
    const std::string config = "scree;input=" + opt.input + ";k=" + opt.k +
                               ";frechet=" + (opt.frechet_margins ? "1" : "0") +
                               ";delimiter=" + opt.delimiter;
    const std::string hash = hash_hex(fnv1a64(config));
    echo_config(hash);

    MatrixHandle raw;
    check(tailpca_matrix_read_csv(opt.input.c_str(), opt.delimiter[0], &raw.ptr));
    MatrixHandle transformed;
    const tailpca_matrix* data = raw.ptr;
    if (opt.frechet_margins) {
        check(tailpca_matrix_frechet_margins(raw.ptr, &transformed.ptr, nullptr));
        data = transformed.ptr;
    }
    const std::int64_t n = tailpca_matrix_rows(data);
    const std::int64_t d = tailpca_matrix_cols(data);
    const std::int64_t k = resolve_k(parse_k_spec(opt.k), n);

    SpectrumHandle spectrum;
    check(tailpca_angular_spectrum(data, k, &spectrum.ptr));
    const std::int64_t limit = std::min(k, d) - 1;
    std::vector<double> scaled(static_cast<std::size_t>(limit));
    std::vector<double> increments(static_cast<std::size_t>(limit > 0 ? limit - 1 : 0));
    check(tailpca_spectrum_scree(spectrum.ptr, limit, scaled.data(), increments.data()));

    std::vector<double> eigenvalues(static_cast<std::size_t>(d));
    check(tailpca_spectrum_values(spectrum.ptr, eigenvalues.data()));
    const std::string lambda_line = "# lambda_max=" + format_double(eigenvalues[0]) + "\n";
    const std::string config_line = "# tailpca config=" + hash + "\n";

    std::string scaled_csv = config_line + lambda_line + "index,value\n";
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        scaled_csv += std::to_string(i + 1) + "," + format_double(scaled[i]) + "\n";
    }
    std::string increments_csv = config_line + lambda_line + "index,value\n";
    for (std::size_t i = 0; i < increments.size(); ++i) {
        increments_csv += std::to_string(i + 1) + "," + format_double(increments[i]) + "\n";
    }
    write_output(opt.out + ".scaled.csv", scaled_csv);
    write_output(opt.out + ".increments.csv", increments_csv);
    return kExitOk;
}

// ---------------------------------------------------------------- simulate

struct SimulateOptions {
    std::string model_spec;
    std::int64_t reps = 500;
    std::int64_t q = 0;
    std::string criterion = "auto";
    int workers = 0;
    std::string seed;
    std::string out;
};

int run_simulate(const SimulateOptions& opt) {
    std::string spec_text = opt.model_spec;
    if (!spec_text.empty() && spec_text[0] == '@') {
        std::ifstream in(spec_text.substr(1));
        if (!in) fail_input("cannot open model spec file \"" + spec_text.substr(1) + "\"");
        std::stringstream buffer;
        buffer << in.rdbuf();
        spec_text = buffer.str();
    }

    // Seed precedence: --seed, then the spec's own seed, then TAILPCA_SEED.
    json spec_json;
    try {
        spec_json = json::parse(spec_text);
    } catch (const json::exception& e) {
        fail_input(std::string("invalid model spec JSON: ") + e.what());
    }
    if (!opt.seed.empty()) {
        spec_json["seed"] = std::strtoull(opt.seed.c_str(), nullptr, 10);
    } else if (!spec_json.contains("seed")) {
        if (const char* env_seed = std::getenv("TAILPCA_SEED")) {
            spec_json["seed"] = std::strtoull(env_seed, nullptr, 10);
        }
    }
    spec_text = spec_json.dump();

    const std::string config = "simulate;spec=" + spec_text + ";reps=" +
                               std::to_string(opt.reps) + ";q=" + std::to_string(opt.q) +
                               ";criterion=" + opt.criterion;
    const std::string hash = hash_hex(fnv1a64(config));
    echo_config(hash);

    std::int64_t d = 0;
    std::int64_t k = 0;
    check(tailpca_model_dims(spec_text.c_str(), &d, nullptr, &k));

    std::vector<tailpca_criterion> kinds;
    if (opt.criterion == "auto") {
        tailpca_criterion aic_kind = TAILPCA_AIC;
        tailpca_criterion bic_kind = TAILPCA_BIC;
        check(tailpca_select_regime(d, k, &aic_kind, &bic_kind));
        kinds = {aic_kind, bic_kind};
    } else {
        kinds = {parse_criterion(opt.criterion)};
    }

    const int workers = opt.workers > 0
                            ? opt.workers
                            : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    ExperimentHandle experiment;
    check(tailpca_experiment_run(spec_text.c_str(), opt.reps, kinds.data(),
                                 static_cast<std::int64_t>(kinds.size()), opt.q, workers,
                                 &experiment.ptr));

    StringHandle long_csv;
    check(tailpca_experiment_to_csv(experiment.ptr, &long_csv.ptr));
    write_output(opt.out + ".csv", "# tailpca config=" + hash + "\n" + long_csv.str());

    StringHandle summary;
    check(tailpca_experiment_summary_json(experiment.ptr, &summary.ptr));
    json summary_json = json::parse(summary.str());
    summary_json["config"] = hash;
    write_output(opt.out + ".summary.json", summary_json.dump(2) + "\n");
    return kExitOk;
}

// ---------------------------------------------------------------------- mp

struct MpOptions {
    double c = 0.0;
    std::string table = "all";
    std::int64_t points = 201;
    std::vector<double> phi;
    std::string out = "-";
};

int run_mp(const MpOptions& opt) {
    const std::string config = "mp;c=" + format_double(opt.c) + ";table=" + opt.table +
                               ";points=" + std::to_string(opt.points) +
                               ";phi_count=" + std::to_string(opt.phi.size());
    const std::string hash = hash_hex(fnv1a64(config));
    echo_config(hash);

    std::string csv = "# tailpca config=" + hash + "\n";
    if (!opt.phi.empty()) {
        csv += "x,phi\n";
        for (const double x : opt.phi) {
            double value = 0.0;
            check(tailpca_phi_c(x, opt.c, &value));
            csv += format_double(x) + "," + format_double(value) + "\n";
        }
        write_output(opt.out, csv);
        return kExitOk;
    }

    if (opt.points < 2) fail_input("--points must be at least 2");
    double lower = 0.0;
    double upper = 0.0;
    check(tailpca_mp_support(opt.c, &lower, &upper));
    double point_mass = 0.0;
    check(tailpca_mp_point_mass(opt.c, &point_mass));
    csv += "# c=" + format_double(opt.c) + " support=[" + format_double(lower) + "," +
           format_double(upper) + "] point_mass=" + format_double(point_mass) + "\n";
    csv += "table,x,value\n";

    const bool all = opt.table == "all";
    if (all || opt.table == "density" || opt.table == "cdf") {
        for (std::int64_t i = 0; i < opt.points; ++i) {
            const double x = lower + (upper - lower) * static_cast<double>(i) /
                                         static_cast<double>(opt.points - 1);
            if (all || opt.table == "density") {
                double value = 0.0;
                check(tailpca_mp_density(x, opt.c, &value));
                csv += "density," + format_double(x) + "," + format_double(value) + "\n";
            }
            if (all || opt.table == "cdf") {
                double value = 0.0;
                check(tailpca_mp_cdf(x, opt.c, &value));
                csv += "cdf," + format_double(x) + "," + format_double(value) + "\n";
            }
        }
    }
    if (all || opt.table == "quantile") {
        for (std::int64_t i = 0; i < opt.points; ++i) {
            const double alpha = point_mass + (1.0 - point_mass) * static_cast<double>(i + 1) /
                                                  static_cast<double>(opt.points + 1);
            double value = 0.0;
            check(tailpca_mp_quantile(alpha, opt.c, &value));
            csv += "quantile," + format_double(alpha) + "," + format_double(value) + "\n";
        }
    }
    write_output(opt.out, csv);
    return kExitOk;
}

// --------------------------------------------------------------------- gap

struct GapOptions {
    std::vector<double> xi;
    std::vector<double> c;
    std::string out = "-";
};

int run_gap(const GapOptions& opt) {
    std::string config = "gap;xi=";
    for (const double v : opt.xi) config += format_double(v) + "|";
    config += ";c=";
    for (const double v : opt.c) config += format_double(v) + "|";
    const std::string hash = hash_hex(fnv1a64(config));
    echo_config(hash);

    std::string csv = "# tailpca config=" + hash + "\n";
    csv += "xi,c,predicted,gap_margin,gap_satisfied,modified_margin,modified_satisfied\n";
    for (const double xi : opt.xi) {
        for (const double c : opt.c) {
            double predicted = 0.0;
            check(tailpca_spike_forecast(xi, c, nullptr, &predicted));
            double margin = 0.0;
            int satisfied = 0;
            check(tailpca_gap_condition(xi, c, &margin, &satisfied));
            csv += format_double(xi) + "," + format_double(c) + "," +
                   format_double(predicted) + "," + format_double(margin) + "," +
                   std::to_string(satisfied);
            if (c > 1.0) {
                double modified_margin = 0.0;
                int modified_satisfied = 0;
                check(tailpca_modified_gap_condition(xi, c, &modified_margin,
                                                     &modified_satisfied));
                csv += "," + format_double(modified_margin) + "," +
                       std::to_string(modified_satisfied);
            } else {
                csv += ",,";
            }
            csv += "\n";
        }
    }
    write_output(opt.out, csv);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Principal-component count estimation for multivariate extremes"};
    app.require_subcommand(1);

    EstimateOptions estimate;
    auto* estimate_cmd =
        app.add_subcommand("estimate", "Estimate the number of significant components");
    estimate_cmd->add_option("--input", estimate.input, "input CSV file")->required();
    estimate_cmd->add_option("--k", estimate.k, "extreme count (integer or fraction of n)");
    estimate_cmd->add_option("--k-grid", estimate.k_grid,
                             "comma-separated list of k values or fractions");
    estimate_cmd->add_option("--q", estimate.q, "candidate dimension bound");
    estimate_cmd->add_option("--criterion", estimate.criterion,
                             "auto|aic|bic|aic-circ|bic-circ|aic-star|bic-star");
    estimate_cmd->add_flag("--frechet-margins", estimate.frechet_margins,
                           "rank-transform margins to standard Frechet first");
    estimate_cmd->add_option("--delimiter", estimate.delimiter, "CSV delimiter");
    estimate_cmd->add_option("--out", estimate.out, "output path or - for stdout");
    estimate_cmd->add_option("--format", estimate.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));

    ScreeOptions scree;
    auto* scree_cmd = app.add_subcommand("scree", "Write scree diagnostics as CSV");
    scree_cmd->add_option("--input", scree.input, "input CSV file")->required();
    scree_cmd->add_option("--k", scree.k, "extreme count (integer or fraction of n)")
        ->required();
    scree_cmd->add_flag("--frechet-margins", scree.frechet_margins,
                        "rank-transform margins to standard Frechet first");
    scree_cmd->add_option("--delimiter", scree.delimiter, "CSV delimiter");
    scree_cmd->add_option("--out", scree.out, "output base path")->required();

    SimulateOptions simulate;
    auto* simulate_cmd =
        app.add_subcommand("simulate", "Run a seeded replication experiment");
    simulate_cmd->add_option("--model-spec", simulate.model_spec,
                             "model spec JSON (or @file)")
        ->required();
    simulate_cmd->add_option("--reps", simulate.reps, "replication count");
    simulate_cmd->add_option("--q", simulate.q, "candidate dimension bound");
    simulate_cmd->add_option("--criterion", simulate.criterion,
                             "auto or an explicit criterion");
    simulate_cmd->add_option("--workers", simulate.workers, "worker thread count");
    simulate_cmd->add_option("--seed", simulate.seed, "seed override");
    simulate_cmd->add_option("--out", simulate.out, "output base path")->required();

    MpOptions mp;
    auto* mp_cmd = app.add_subcommand("mp", "Bulk spectral law tables");
    mp_cmd->add_option("--c", mp.c, "aspect ratio c (> 0, != 1)")->required();
    mp_cmd->add_option("--table", mp.table, "density|cdf|quantile|all")
        ->check(CLI::IsMember({"density", "cdf", "quantile", "all"}));
    mp_cmd->add_option("--points", mp.points, "grid size");
    mp_cmd->add_option("--phi", mp.phi, "evaluate the spike map at these points");
    mp_cmd->add_option("--out", mp.out, "output path or - for stdout");

    GapOptions gap;
    auto* gap_cmd = app.add_subcommand("gap", "Consistency gap condition margins");
    gap_cmd->add_option("--xi", gap.xi, "population spike values")->required();
    gap_cmd->add_option("--c", gap.c, "aspect ratios")->required();
    gap_cmd->add_option("--out", gap.out, "output path or - for stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitInput;
    }

    try {
        if (estimate_cmd->parsed()) return run_estimate(estimate);
        if (scree_cmd->parsed()) return run_scree(scree);
        if (simulate_cmd->parsed()) return run_simulate(simulate);
        if (mp_cmd->parsed()) return run_mp(mp);
        if (gap_cmd->parsed()) return run_gap(gap);
    } catch (const CommandError& e) {
        std::cerr << "tailpca: error: " << e.message << "\n";
        return e.code;
    } catch (const std::exception& e) {
        std::cerr << "tailpca: error: " << e.what() << "\n";
        return 1;
    }
    return kExitInput;
}
