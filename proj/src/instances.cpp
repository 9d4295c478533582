#include "rankmin/instances.hpp"

#include <cstdio>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rankmin/errors.hpp"
#include "rankmin/rng.hpp"

namespace rankmin {

namespace {

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

double parse_double(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected a real number, got '" + s + "'", line);
  }
}

long long parse_int(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    long long v = std::stoll(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected an integer, got '" + s + "'", line);
  }
}

std::uint64_t parse_uint64(const std::string& s, int line) {
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size() || s.front() == '-') throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ParseError("expected an unsigned integer, got '" + s + "'", line);
  }
}

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream iss(line);
  std::string tok;
  while (iss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

std::string to_string(InstanceKind kind) {
  switch (kind) {
    case InstanceKind::Edm: return "edm";
    case InstanceKind::CounterexampleSdp: return "counterexample_sdp";
    case InstanceKind::CounterexamplePenalty: return "counterexample_penalty";
    case InstanceKind::Generic: return "generic";
  }
  return "generic";
}

InstanceKind instance_kind_from_string(const std::string& s) {
  if (s == "edm") return InstanceKind::Edm;
  if (s == "counterexample_sdp") return InstanceKind::CounterexampleSdp;
  if (s == "counterexample_penalty") return InstanceKind::CounterexamplePenalty;
  if (s == "generic") return InstanceKind::Generic;
  throw std::invalid_argument("unknown instance kind '" + s + "'");
}

std::pair<Instance, PointCloud> gen_edm_instance(int n_points, int n_samples, int dim,
                                                 std::uint64_t seed) {
  if (n_points < 2) throw std::invalid_argument("gen_edm_instance: need at least 2 points");
  if (dim < 1) throw std::invalid_argument("gen_edm_instance: dim must be >= 1");
  const long long max_pairs = static_cast<long long>(n_points) * (n_points - 1) / 2;
  if (n_samples < 1 || n_samples > max_pairs)
    throw std::invalid_argument("gen_edm_instance: n_samples must be in [1, n_points*(n_points-1)/2]");

  auto rng = make_rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);

  PointCloud cloud;
  cloud.points.resize(n_points, dim);
  for (int i = 0; i < n_points; ++i)
    for (int d = 0; d < dim; ++d) cloud.points(i, d) = unit(rng);

  // sample distinct unordered pairs via a partial Fisher-Yates over all pairs
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(max_pairs);
  for (int i = 0; i < n_points; ++i)
    for (int j = i + 1; j < n_points; ++j) pairs.emplace_back(i, j);
  for (int s = 0; s < n_samples; ++s) {
    std::uniform_int_distribution<std::size_t> pick(s, pairs.size() - 1);
    std::swap(pairs[s], pairs[pick(rng)]);
  }

  std::vector<SparseSym> coeffs(n_samples);
  Vector b(n_samples);
  for (int s = 0; s < n_samples; ++s) {
    const auto [i, j] = pairs[s];
    coeffs[s] = {{i, i, 1.0}, {j, j, 1.0}, {i, j, -1.0}};
    b[s] = (cloud.points.row(i) - cloud.points.row(j)).squaredNorm();
  }

  Instance inst;
  inst.op = AffineOperator(n_points, std::move(coeffs), std::move(b));
  inst.meta.kind = InstanceKind::Edm;
  inst.meta.seed = seed;
  inst.meta.n_points = n_points;
  inst.meta.n_samples = n_samples;
  inst.meta.dim = dim;
  inst.meta.ground_truth_rank = dim;
  return {std::move(inst), std::move(cloud)};
}

std::vector<Instance> counterexample_instances() {
  std::vector<Instance> out;

  // Linear SDP whose optimum has no calm multiplier. Feasible matrices have
  // the pattern X = [[1+t, 0, 0], [0, s, t], [0, t, 0]]; the free parameter t
  // is eliminated through X11 - X23 = 1, and PSD forces t = 0.
  {
    std::vector<SparseSym> coeffs = {
        {{0, 1, 0.5}},                 // X12 = 0
        {{0, 2, 0.5}},                 // X13 = 0
        {{2, 2, 1.0}},                 // X33 = 0
        {{0, 0, 1.0}, {1, 2, -0.5}},   // X11 - X23 = 1
    };
    Vector b(4);
    b << 0, 0, 0, 1;
    Instance inst;
    inst.op = AffineOperator(3, std::move(coeffs), std::move(b));
    inst.meta.kind = InstanceKind::CounterexampleSdp;
    inst.meta.opt_objective = 0.0;
    out.push_back(std::move(inst));
  }

  // Penalty instance with known optimum: the pattern
  // X = [[3+t, 0, 0], [0, 1-t, t/2], [0, t/2, 0]] with t eliminated into five
  // equalities; PSD again forces t = 0, so the only feasible X is diag(3,1,0).
  {
    std::vector<SparseSym> coeffs = {
        {{0, 0, 1.0}, {1, 1, 1.0}},   // X11 + X22 = 4
        {{1, 1, 1.0}, {1, 2, 1.0}},   // X22 + 2 X23 = 1
        {{2, 2, 1.0}},                // X33 = 0
        {{0, 1, 0.5}},                // X12 = 0
        {{0, 2, 0.5}},                // X13 = 0
    };
    Vector b(5);
    b << 4, 1, 0, 0, 0;
    Instance inst;
    inst.op = AffineOperator(3, std::move(coeffs), std::move(b));
    inst.meta.kind = InstanceKind::CounterexamplePenalty;
    inst.meta.opt_objective = 1.5;
    out.push_back(std::move(inst));
  }
  return out;
}

PenaltyOptimum counterexample_penalty_optimum() {
  PenaltyOptimum opt;
  opt.x = Vector{{3.0, 1.0, 0.0}}.asDiagonal();
  opt.u = Vector{{0.0, 1.0, 1.0}}.asDiagonal();
  opt.rho = 0.5;
  opt.objective = 1.5;
  return opt;
}

void save_instance(const Instance& inst, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_instance: cannot open " + path.string());
  out << encode_instance(inst);
  if (!out) throw std::runtime_error("save_instance: write failed for " + path.string());
}

Instance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_instance: cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return decode_instance(buf.str());
}

std::string encode_instance(const Instance& inst) {
  std::ostringstream out;
  out << "sdcmpcc-instance v1 n=" << inst.n() << " m=" << inst.op.m()
      << " kind=" << to_string(inst.meta.kind) << " seed=" << inst.meta.seed;
  if (inst.meta.n_points > 0) out << " n_points=" << inst.meta.n_points;
  if (inst.meta.n_samples > 0) out << " n_samples=" << inst.meta.n_samples;
  if (inst.meta.dim > 0) out << " dim=" << inst.meta.dim;
  if (inst.meta.ground_truth_rank) out << " rank=" << *inst.meta.ground_truth_rank;
  if (inst.meta.opt_objective) out << " opt_objective=" << fmt_double(*inst.meta.opt_objective);
  out << "\n";
  for (Index i = 0; i < inst.op.m(); ++i) {
    out << "constraint " << i << " b=" << fmt_double(inst.b()[i]) << "\n";
    for (const auto& t : inst.op.coeffs()[i])
      out << t.row << " " << t.col << " " << fmt_double(t.value) << "\n";
  }
  return out.str();
}

Instance decode_instance(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  if (!std::getline(in, line)) throw ParseError("empty file", 1);
  ++lineno;
  auto head = split_ws(line);
  if (head.size() < 2 || head[0] != "sdcmpcc-instance")
    throw ParseError("not an sdcmpcc-instance file", lineno);
  if (head[1] != "v1")
    throw ParseError("unsupported version '" + head[1] + "' (expected v1)", lineno);

  Index n = -1, m = -1;
  InstanceMeta meta;
  bool have_kind = false, have_seed = false;
  for (std::size_t i = 2; i < head.size(); ++i) {
    auto eq = head[i].find('=');
    if (eq == std::string::npos)
      throw ParseError("malformed header field '" + head[i] + "'", lineno);
    const std::string key = head[i].substr(0, eq);
    const std::string val = head[i].substr(eq + 1);
    if (key == "n") n = parse_int(val, lineno);
    else if (key == "m") m = parse_int(val, lineno);
    else if (key == "kind") {
      try {
        meta.kind = instance_kind_from_string(val);
      } catch (const std::invalid_argument& e) {
        throw ParseError(e.what(), lineno);
      }
      have_kind = true;
    } else if (key == "seed") {
      meta.seed = parse_uint64(val, lineno);
      have_seed = true;
    } else if (key == "n_points") meta.n_points = static_cast<int>(parse_int(val, lineno));
    else if (key == "n_samples") meta.n_samples = static_cast<int>(parse_int(val, lineno));
    else if (key == "dim") meta.dim = static_cast<int>(parse_int(val, lineno));
    else if (key == "rank") meta.ground_truth_rank = static_cast<int>(parse_int(val, lineno));
    else if (key == "opt_objective") meta.opt_objective = parse_double(val, lineno);
    else throw ParseError("unknown header field '" + key + "'", lineno);
  }
  if (n < 1) throw ParseError("missing or invalid n", lineno);
  if (m < 0) throw ParseError("missing or invalid m", lineno);
  if (!have_kind) throw ParseError("missing kind", lineno);
  if (!have_seed) throw ParseError("missing seed", lineno);

  std::vector<SparseSym> coeffs(m);
  Vector b = Vector::Zero(m);
  Index current = -1;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = split_ws(line);
    if (toks.empty()) continue;  // tolerate blank separator lines
    if (toks[0] == "constraint") {
      if (toks.size() != 3 || toks[2].rfind("b=", 0) != 0)
        throw ParseError("malformed constraint line", lineno);
      const long long idx = parse_int(toks[1], lineno);
      if (idx != current + 1)
        throw ParseError("constraint index " + std::to_string(idx) + " out of order", lineno);
      if (idx >= m) throw ParseError("more constraints than declared m", lineno);
      current = idx;
      b[current] = parse_double(toks[2].substr(2), lineno);
    } else {
      if (current < 0) throw ParseError("triple before any constraint header", lineno);
      if (toks.size() != 3) throw ParseError("expected 'row col value' triple", lineno);
      Triple t;
      t.row = static_cast<int>(parse_int(toks[0], lineno));
      t.col = static_cast<int>(parse_int(toks[1], lineno));
      t.value = parse_double(toks[2], lineno);
      coeffs[current].push_back(t);
    }
  }
  if (current + 1 != m)
    throw ParseError("file truncated: found " + std::to_string(current + 1) + " of " +
                         std::to_string(m) + " constraints",
                     lineno + 1);

  Instance inst;
  try {
    inst.op = AffineOperator(n, std::move(coeffs), std::move(b));
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what(), lineno);
  }
  inst.meta = meta;
  return inst;
}

}  // namespace rankmin
