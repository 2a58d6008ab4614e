#pragma once

#include "lqsp/experiment.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lqsp {

/// Parses "0.5", "1/2", "2/3", ... Throws std::invalid_argument otherwise.
double parse_q(const std::string& text);

/// Median of the values; the mean of the two middle elements for even counts.
double median(std::vector<double> values);

/// Aggregates trial rows into one row: medians of the numeric fields, most
/// frequent status (first seen wins ties).
MetricRow aggregate_median(const std::vector<MetricRow>& trials, const std::string& label);

/// Entry point of the command-line tool; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lqsp
