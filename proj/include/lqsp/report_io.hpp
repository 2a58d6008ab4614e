#pragma once

#include "lqsp/experiment.hpp"
#include "lqsp/solver.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace lqsp {

inline constexpr const char* kCsvHeader = "algo,q,f,re_err,acc,nnz,time,iters,status";

/// Header plus one line per row; floats use 6 significant digits and missing
/// optionals are empty fields.
void write_csv(std::ostream& out, const std::vector<MetricRow>& rows);
std::string format_csv_row(const MetricRow& row);

/// Inverse of write_csv. Throws std::runtime_error on a bad header or field.
std::vector<MetricRow> read_csv(std::istream& in);

/// One line per iteration: k,F,grad_inf,supp,alpha,beta,newton (no header).
/// Values use 17 significant digits, beta is "nan" when no Newton step was
/// taken and newton is 0/1.
void write_trace(std::ostream& out, const std::vector<TraceRecord>& trace);

}  // namespace lqsp
