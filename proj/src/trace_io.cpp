#include "rankmin/trace_io.hpp"

#include <cstdio>
#include <sstream>
#include <stdexcept>

namespace rankmin {

namespace {

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

const char* class_name(EigenpairClass c) {
  switch (c) {
    case EigenpairClass::AtOne: return "at_one";
    case EigenpairClass::AtZero: return "at_zero";
    case EigenpairClass::Interior: return "interior";
  }
  return "interior";
}

}  // namespace

std::string format_trace_csv(const SolveReport& report) {
  std::ostringstream out;
  out << "iter,f_rho,comp,rank_x,trace_u,newton_iters,cg_iters,elapsed_ms\n";
  for (const auto& r : report.trace) {
    out << r.iter << ',' << g17(r.f_rho) << ',' << g17(r.comp) << ',' << r.rank_x << ','
        << g17(r.trace_u) << ',' << r.newton_iters << ',' << r.cg_iters << ','
        << g17(r.elapsed_ms) << "\n";
  }
  out << "# diagnostics\n";
  out << "key,value\n";
  out << "status," << to_string(report.status) << "\n";
  out << "complementarity," << g17(report.diagnostics.complementarity) << "\n";
  out << "rank_x," << report.diagnostics.rank_x << "\n";
  out << "trace_u," << g17(report.diagnostics.trace_u) << "\n";
  out << "stat_res_x," << g17(report.diagnostics.stat_res_x) << "\n";
  out << "stat_res_u," << g17(report.diagnostics.stat_res_u) << "\n";
  out << "rho_final," << g17(report.rho_final) << "\n";
  out << "wall_ms," << g17(report.wall_ms) << "\n";
  out << "prox_calls," << report.prox_calls << "\n";
  out << "total_newton_iters," << report.total_newton_iters << "\n";
  out << "total_cg_iters," << report.total_cg_iters << "\n";
  out << "max_prox_grad_norm," << g17(report.max_prox_grad_norm) << "\n";
  out << "# eigenpairs\n";
  out << "sigma,vxv,class,satisfied\n";
  for (const auto& p : report.diagnostics.eigenpair_report) {
    out << g17(p.sigma) << ',' << g17(p.vxv) << ',' << class_name(p.classification) << ','
        << (p.satisfied ? 1 : 0) << "\n";
  }
  return out.str();
}

std::vector<std::vector<std::string>> read_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.front() == '#') {
      rows.push_back({line});
      continue;
    }
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(line);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.push_back("");
    rows.push_back(std::move(cells));
  }
  return rows;
}

std::string write_csv(const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream out;
  for (const auto& row : rows) {
    if (row.size() == 1 && !row.front().empty() && row.front().front() == '#') {
      out << row.front() << "\n";
      continue;
    }
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      out << row[i];
    }
    out << "\n";
  }
  return out.str();
}

std::vector<TraceRow> parse_trace_rows(const std::string& text) {
  auto rows = read_csv(text);
  std::vector<TraceRow> out;
  bool seen_header = false;
  for (const auto& row : rows) {
    if (!row.empty() && !row.front().empty() && row.front().front() == '#') break;
    if (!seen_header) {
      if (row.empty() || row.front() != "iter")
        throw std::runtime_error("parse_trace_rows: missing trace header");
      seen_header = true;
      continue;
    }
    if (row.size() != 8) throw std::runtime_error("parse_trace_rows: malformed row");
    TraceRow r;
    r.iter = std::stoi(row[0]);
    r.f_rho = std::stod(row[1]);
    r.comp = std::stod(row[2]);
    r.rank_x = std::stoi(row[3]);
    r.trace_u = std::stod(row[4]);
    r.newton_iters = std::stoi(row[5]);
    r.cg_iters = std::stol(row[6]);
    r.elapsed_ms = std::stod(row[7]);
    out.push_back(r);
  }
  return out;
}

}  // namespace rankmin
