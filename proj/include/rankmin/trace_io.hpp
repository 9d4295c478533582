#pragma once

#include <string>
#include <vector>

#include "rankmin/palm.hpp"

// CSV serialization of solve traces. The layout is a per-iteration table with
// header iter,f_rho,comp,rank_x,trace_u,newton_iters,cg_iters,elapsed_ms,
// followed by a '# diagnostics' key,value section and a '# eigenpairs' table.

namespace rankmin {

std::string format_trace_csv(const SolveReport& report);

// Generic cell-level CSV codec; comment lines (leading '#') are kept as
// single-cell rows so that write_csv(read_csv(text)) == text.
std::vector<std::vector<std::string>> read_csv(const std::string& text);
std::string write_csv(const std::vector<std::vector<std::string>>& rows);

// Typed re-parse of the per-iteration table of format_trace_csv output.
std::vector<TraceRow> parse_trace_rows(const std::string& text);

}  // namespace rankmin
