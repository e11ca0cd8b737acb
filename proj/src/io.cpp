#include "metadyn/io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "metadyn/errors.hpp"

namespace metadyn {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

double parse_real(const std::string& token, int line_no) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(token, &used);
  } catch (const std::exception&) {
    throw ParseError("expected a number, got '" + token + "'", line_no);
  }
  if (used != token.size()) throw ParseError("expected a number, got '" + token + "'", line_no);
  if (!std::isfinite(v)) throw ParseError("non-finite value '" + token + "'", line_no);
  return v;
}

struct PendingStructure {
  std::string id;
  int line = 0;
  bool has_q = false;
  double q = 0;
  std::vector<std::array<double, 5>> atoms;
};

}  // namespace

ReferenceSet read_references(std::istream& in, double lambda) {
  std::string line;
  int line_no = 0;
  if (!std::getline(in, line)) throw ParseError("empty reference file", 1);
  ++line_no;
  if (line != kRefsetHeader) throw ParseError("missing header '" + std::string(kRefsetHeader) + "'", line_no);

  std::vector<PendingStructure> pending;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    std::istringstream fields(line);
    std::string first;
    fields >> first;
    if (first == "STRUCTURE") {
      PendingStructure s;
      s.line = line_no;
      if (!(fields >> s.id)) throw ParseError("STRUCTURE needs an id", line_no);
      std::string tok;
      while (fields >> tok) {
        if (tok.rfind("q=", 0) == 0) {
          s.q = parse_real(tok.substr(2), line_no);
          s.has_q = true;
        } else {
          throw ParseError("unexpected token '" + tok + "' after STRUCTURE", line_no);
        }
      }
      pending.push_back(std::move(s));
      continue;
    }
    if (first.rfind('#', 0) == 0) continue;
    if (pending.empty()) throw ParseError("atom line before any STRUCTURE", line_no);
    std::array<double, 5> atom{};
    std::vector<std::string> tokens{first};
    std::string tok;
    while (fields >> tok) tokens.push_back(tok);
    if (tokens.size() != 5) throw ParseError("atom line needs 5 fields: x y z w wprime", line_no);
    for (int i = 0; i < 5; ++i) atom[static_cast<std::size_t>(i)] = parse_real(tokens[static_cast<std::size_t>(i)], line_no);
    pending.back().atoms.push_back(atom);
  }
  if (pending.empty()) throw ParseError("no structures in file", line_no);

  ReferenceSet ref;
  ref.lambda = lambda;
  const std::size_t n_atoms = pending.front().atoms.size();
  for (std::size_t i = 0; i < pending.size(); ++i) {
    const PendingStructure& p = pending[i];
    if (p.atoms.size() != n_atoms)
      throw InvalidStructure("structure '" + p.id + "' (line " + std::to_string(p.line) + ") has " +
                             std::to_string(p.atoms.size()) + " atoms, expected " + std::to_string(n_atoms));
    const auto n = static_cast<Eigen::Index>(p.atoms.size());
    Coords<double> c(3, n);
    Weights<double> w(n), wp(n);
    for (Eigen::Index j = 0; j < n; ++j) {
      const auto& a = p.atoms[static_cast<std::size_t>(j)];
      c.col(j) = Vec3<double>(a[0], a[1], a[2]);
      w(j) = a[3];
      wp(j) = a[4];
    }
    try {
      ref.structures.push_back(center(make_structure<double>(c, w, wp)));
    } catch (const InvalidStructure& e) {
      throw InvalidStructure("structure '" + p.id + "' (line " + std::to_string(p.line) + "): " + e.what());
    }
    ref.properties.push_back(p.has_q ? p.q : static_cast<double>(i));
  }
  for (std::size_t i = 1; i < ref.size(); ++i) {
    if (ref.structures[i].disp != ref.structures[0].disp || ref.structures[i].align != ref.structures[0].align)
      throw InvalidStructure("structure '" + pending[i].id + "' (line " + std::to_string(pending[i].line) +
                             ") has weights that differ from the first structure");
  }
  return ref;
}

ReferenceSet load_references(const std::string& path, double lambda) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open reference file '" + path + "'");
  return read_references(in, lambda);
}

void write_references(std::ostream& out, const ReferenceSet& ref) {
  out << kRefsetHeader << '\n';
  for (std::size_t i = 0; i < ref.size(); ++i) {
    if (i > 0) out << '\n';
    out << "STRUCTURE " << i << " q=" << fmt17(ref.properties[i]) << '\n';
    const StructureD& s = ref.structures[i];
    for (Eigen::Index j = 0; j < s.size(); ++j) {
      out << fmt17(s.coords(0, j)) << ' ' << fmt17(s.coords(1, j)) << ' ' << fmt17(s.coords(2, j)) << ' '
          << fmt17(s.disp(j)) << ' ' << fmt17(s.align(j)) << '\n';
    }
  }
}

void save_references(const std::string& path, const ReferenceSet& ref) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write reference file '" + path + "'");
  write_references(out, ref);
}

void write_trajectory(std::ostream& out, std::span<const Frame> frames) {
  for (const Frame& f : frames) {
    out << f.step << '\n';
    for (Eigen::Index j = 0; j < f.coords.cols(); ++j)
      out << fmt17(f.coords(0, j)) << ' ' << fmt17(f.coords(1, j)) << ' ' << fmt17(f.coords(2, j)) << '\n';
  }
}

void write_cv_series(std::ostream& out, const RunReport& report) {
  out << "step,cv_value,bias\n";
  for (std::size_t i = 0; i < report.cv_series.size(); ++i)
    out << i << ',' << fmt17(report.cv_series[i]) << ',' << fmt17(report.bias_series[i]) << '\n';
}

}  // namespace metadyn
