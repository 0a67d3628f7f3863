#include "tailpca/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include <nlohmann/json.hpp>

#include "tailpca/error.hpp"

namespace tailpca {

namespace {

using json = nlohmann::ordered_json;

std::vector<std::string_view> split(std::string_view line, char delimiter) {
    std::vector<std::string_view> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(delimiter, start);
        if (pos == std::string_view::npos) {
            cells.push_back(line.substr(start));
            return cells;
        }
        cells.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

bool parse_cell(std::string_view cell, double& out) {
    cell = trim(cell);
    if (cell.empty()) return false;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc{} && ptr == end && std::isfinite(out);
}

std::string join_line_numbers(const std::vector<std::size_t>& lines) {
    std::string out;
    const std::size_t shown = std::min<std::size_t>(lines.size(), 20);
    for (std::size_t i = 0; i < shown; ++i) {
        if (i > 0) out += ", ";
        out += std::to_string(lines[i]);
    }
    if (lines.size() > shown) out += ", ...";
    return out;
}

}  // namespace

std::string format_double(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

CsvReadResult parse_data_csv(std::istream& in, char delimiter) {
    std::vector<std::vector<double>> rows;
    std::vector<std::size_t> bad_lines;
    bool had_header = false;
    std::size_t line_number = 0;
    std::size_t columns = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_number;
        if (trim(line).empty()) continue;
        const auto cells = split(line, delimiter);
        std::vector<double> row(cells.size());
        bool ok = true;
        for (std::size_t j = 0; j < cells.size(); ++j) {
            if (!parse_cell(cells[j], row[j])) {
                ok = false;
                break;
            }
        }
        if (!ok) {
            if (rows.empty() && bad_lines.empty() && !had_header) {
                had_header = true;  // non-numeric first row is a header
                columns = cells.size();
                continue;
            }
            bad_lines.push_back(line_number);
            continue;
        }
        if (columns == 0) columns = cells.size();
        if (cells.size() != columns) {
            bad_lines.push_back(line_number);
            continue;
        }
        rows.push_back(std::move(row));
    }
    if (!bad_lines.empty()) {
        throw_input("non-numeric or malformed cells in rows: " + join_line_numbers(bad_lines));
    }
    if (rows.empty()) throw_input("no data rows");

    Matrix values(static_cast<Index>(rows.size()), static_cast<Index>(columns));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        for (std::size_t j = 0; j < columns; ++j) {
            values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
        }
    }
    return CsvReadResult{DataMatrix(std::move(values)), had_header};
}

CsvReadResult read_data_csv(const std::string& path, char delimiter) {
    std::ifstream in(path);
    if (!in) throw_input("cannot open \"" + path + "\"");
    return parse_data_csv(in, delimiter);
}

std::string matrix_to_csv(const DataMatrix& data, char delimiter) {
    std::string out;
    out.reserve(static_cast<std::size_t>(data.rows() * data.cols()) * 12);
    for (Index i = 0; i < data.rows(); ++i) {
        for (Index j = 0; j < data.cols(); ++j) {
            if (j > 0) out.push_back(delimiter);
            out += format_double(data.values()(i, j));
        }
        out.push_back('\n');
    }
    return out;
}

std::string curve_to_csv(const CriterionCurve& curve) {
    std::string out = "p,value\n";
    for (Index p = 1; p <= curve.q; ++p) {
        out += std::to_string(p);
        out.push_back(',');
        out += format_double(curve.value_at(p));
        out.push_back('\n');
    }
    return out;
}

std::string curve_to_json(const CriterionCurve& curve) {
    json out;
    out["kind"] = std::string(to_string(curve.kind));
    out["k"] = curve.k;
    out["d"] = curve.d;
    out["q"] = curve.q;
    out["p_hat"] = curve.p_hat;
    out["values"] = curve.values;
    return out.dump();
}

std::string experiment_to_csv(const ExperimentResult& result) {
    std::string out = "replication,kind,p_hat\n";
    for (Index r = 0; r < result.replications; ++r) {
        for (std::size_t ki = 0; ki < result.kinds.size(); ++ki) {
            out += std::to_string(r);
            out.push_back(',');
            out += std::string(to_string(result.kinds[ki]));
            out.push_back(',');
            out += std::to_string(result.p_hats[ki][static_cast<std::size_t>(r)]);
            out.push_back('\n');
        }
    }
    return out;
}

std::string experiment_summary_json(const ExperimentResult& result) {
    json out;
    out["model_spec"] = json::parse(result.spec.to_json());
    out["replications"] = result.replications;
    out["k"] = result.k;
    out["q"] = result.q;
    json histograms = json::object();
    for (std::size_t ki = 0; ki < result.kinds.size(); ++ki) {
        std::map<Index, Index> histogram;
        for (const Index p : result.p_hats[ki]) ++histogram[p];
        json entry = json::object();
        for (const auto& [p, count] : histogram) entry[std::to_string(p)] = count;
        histograms[std::string(to_string(result.kinds[ki]))] = std::move(entry);
    }
    out["histograms"] = std::move(histograms);
    return out.dump();
}

}  // namespace tailpca
