#ifndef TAILPCA_CSV_HPP
#define TAILPCA_CSV_HPP

#include <iosfwd>
#include <string>

#include "tailpca/angular.hpp"
#include "tailpca/criteria.hpp"
#include "tailpca/simulate.hpp"

namespace tailpca {

/// Shortest text form of v that parses back to the same double.
std::string format_double(double v);

struct CsvReadResult {
    DataMatrix data;
    bool had_header;
};

/// One observation per row, decimal point '.', configurable delimiter.
/// A non-numeric first row is treated as a header. Rows with non-numeric
/// (or non-finite) cells are a hard error listing the offending line numbers.
CsvReadResult read_data_csv(const std::string& path, char delimiter = ',');
CsvReadResult parse_data_csv(std::istream& in, char delimiter = ',');

/// Plain numeric CSV, no header, full round-trip precision.
std::string matrix_to_csv(const DataMatrix& data, char delimiter = ',');

/// "p,value" rows for p = 1..q.
std::string curve_to_csv(const CriterionCurve& curve);

/// {"kind", "k", "d", "q", "p_hat", "values"} object.
std::string curve_to_json(const CriterionCurve& curve);

/// Long format: one "replication,kind,p_hat" row per replication and kind.
std::string experiment_to_csv(const ExperimentResult& result);

/// Model spec, resolved k, q, and a per-kind histogram of the estimates.
std::string experiment_summary_json(const ExperimentResult& result);

}  // namespace tailpca

#endif
