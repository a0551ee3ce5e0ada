#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "flexcomm/lp_format.hpp"
#include "flexcomm/mip.hpp"

using namespace flexcomm;

namespace {

// Minimal LP-format reader, used only to verify that exported files round
// trip. Handles exactly the dialect the writer emits.
MipModel parse_lp(const std::string& text) {
  // Join wrapped expression lines (continuations start with five spaces).
  std::vector<std::string> lines;
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      if (line.rfind("     ", 0) == 0 && !lines.empty())
        lines.back() += " " + line.substr(5);
      else
        lines.push_back(line);
    }
  }

  MipModel m;
  int max_var = -1;
  auto var_id = [&max_var](const std::string& tok) {
    REQUIRE(tok.size() > 1);
    REQUIRE(tok[0] == 'x');
    const int id = std::atoi(tok.c_str() + 1);
    max_var = std::max(max_var, id);
    return id;
  };
  // Parses "sign coef var" triples until a sense token or end; returns the
  // sense ("" for the objective).
  auto parse_terms = [&](std::istringstream& in, std::vector<int>& idx,
                         std::vector<double>& coef) {
    std::string tok;
    while (in >> tok) {
      if (tok == "<=" || tok == "=" || tok == ">=") return tok;
      REQUIRE((tok == "+" || tok == "-"));
      const double sign = tok == "-" ? -1.0 : 1.0;
      double c = 0.0;
      REQUIRE((in >> c));
      std::string var;
      REQUIRE((in >> var));
      idx.push_back(var_id(var));
      coef.push_back(sign * c);
    }
    return std::string();
  };

  enum class Section { none, objective, rows, bounds, binary };
  Section section = Section::none;
  std::vector<MipRow> rows;
  struct Bound {
    int var;
    double lo, hi;
  };
  std::vector<Bound> bounds;
  std::vector<int> binaries;
  double offset = 0.0;

  for (const std::string& raw : lines) {
    if (raw.rfind("\\ objective offset ", 0) == 0) {
      offset = std::strtod(raw.c_str() + 19, nullptr);
      continue;
    }
    if (raw == "Minimize") {
      section = Section::objective;
      continue;
    }
    if (raw == "Subject To") {
      section = Section::rows;
      continue;
    }
    if (raw == "Bounds") {
      section = Section::bounds;
      continue;
    }
    if (raw == "Binary") {
      section = Section::binary;
      continue;
    }
    if (raw == "End") break;

    std::istringstream in(raw);
    switch (section) {
      case Section::objective: {
        std::string label;
        in >> label;  // "obj:"
        std::vector<int> idx;
        std::vector<double> coef;
        parse_terms(in, idx, coef);
        MipRow pseudo;  // stash the objective in a row shape
        pseudo.idx = idx;
        pseudo.coef = coef;
        pseudo.tag = "objective";
        rows.insert(rows.begin(), pseudo);  // slot 0, removed later
        break;
      }
      case Section::rows: {
        std::string label;
        in >> label;
        REQUIRE(label.back() == ':');
        MipRow r;
        r.tag = label.substr(0, label.find_last_of('_'));
        const std::string sense = parse_terms(in, r.idx, r.coef);
        REQUIRE_FALSE(sense.empty());
        r.sense = sense == "<=" ? RowSense::le
                                : sense == ">=" ? RowSense::ge : RowSense::eq;
        REQUIRE((in >> r.rhs));
        rows.push_back(std::move(r));
        break;
      }
      case Section::bounds: {
        // five forms: "x = v" | "x free" | "-inf <= x <= v" | "x >= lo"
        //             | "lo <= x <= hi"
        std::vector<std::string> toks;
        std::string tok;
        while (in >> tok) toks.push_back(tok);
        REQUIRE(!toks.empty());
        Bound b{0, 0.0, 0.0};
        if (toks.size() == 2 && toks[1] == "free") {
          b = {var_id(toks[0]), -kInf, kInf};
        } else if (toks.size() == 3 && toks[1] == "=") {
          const double v = std::strtod(toks[2].c_str(), nullptr);
          b = {var_id(toks[0]), v, v};
        } else if (toks.size() == 3 && toks[1] == ">=") {
          b = {var_id(toks[0]), std::strtod(toks[2].c_str(), nullptr), kInf};
        } else if (toks.size() == 5 && toks[0] == "-inf") {
          b = {var_id(toks[2]), -kInf, std::strtod(toks[4].c_str(), nullptr)};
        } else {
          REQUIRE(toks.size() == 5);
          b = {var_id(toks[2]), std::strtod(toks[0].c_str(), nullptr),
               std::strtod(toks[4].c_str(), nullptr)};
        }
        bounds.push_back(b);
        break;
      }
      case Section::binary: {
        std::string v;
        while (in >> v) binaries.push_back(var_id(v));
        break;
      }
      case Section::none: FAIL(("content before any section: " + raw));
    }
  }

  m.n_vars = max_var + 1;
  m.lower = Eigen::VectorXd::Zero(m.n_vars);
  m.upper = Eigen::VectorXd::Constant(m.n_vars, kInf);
  m.objective = Eigen::VectorXd::Zero(m.n_vars);
  m.binary.assign(static_cast<std::size_t>(m.n_vars), 0);
  m.objective_offset = offset;
  if (!rows.empty() && rows.front().tag == "objective") {
    for (std::size_t k = 0; k < rows.front().idx.size(); ++k)
      m.objective[rows.front().idx[k]] = rows.front().coef[k];
    rows.erase(rows.begin());
  }
  for (MipRow& r : rows) m.add_row(std::move(r));
  for (const Bound& b : bounds) {
    m.lower[b.var] = b.lo;
    m.upper[b.var] = b.hi;
  }
  for (int j : binaries) m.binary[static_cast<std::size_t>(j)] = 1;
  return m;
}

MipRow row(std::vector<int> idx, std::vector<double> coef, RowSense sense,
           double rhs, const std::string& tag) {
  MipRow r;
  r.idx = std::move(idx);
  r.coef = std::move(coef);
  r.sense = sense;
  r.rhs = rhs;
  r.tag = tag;
  return r;
}

}  // namespace

TEST_CASE("empty model golden file") {
  const MipModel m;
  CHECK(lp_format_text(m) ==
        "Minimize\n"
        " obj:\n"
        "Subject To\n"
        "Bounds\n"
        "End\n");
}

TEST_CASE("one-variable model golden file") {
  MipModel m;
  const int x = m.add_var(0.0, kInf, 1.0);
  m.add_row(row({x}, {1.0}, RowSense::ge, 3.0, "c"));
  CHECK(lp_format_text(m) ==
        "Minimize\n"
        " obj: + 1 x0\n"
        "Subject To\n"
        " c_0: + 1 x0 >= 3\n"
        "Bounds\n"
        " x0 >= 0\n"
        "End\n");
}

TEST_CASE("bound forms, signs, offset and binary section") {
  MipModel m;
  m.add_var(0.0, 1.0, -2.5, true);   // x0: binary
  m.add_var(-kInf, kInf, 0.0);       // x1: free
  m.add_var(-kInf, 4.0, 1.0);        // x2: upper only
  m.add_var(2.0, kInf, 0.0);         // x3: lower only
  m.add_var(3.0, 3.0, 0.0);          // x4: fixed
  m.add_var(-1.0, 2.0, 0.25, false); // x5: two-sided
  m.objective_offset = 2.5;
  m.add_row(row({0, 2, 5}, {1.0, -3.0, 0.5}, RowSense::le, 7.25, "cap"));
  m.add_row(row({1, 4}, {-1.0, 1.0}, RowSense::eq, 0.0, ""));

  const std::string text = lp_format_text(m);
  CHECK(text.rfind("\\ objective offset 2.5\n", 0) == 0);
  CHECK(text.find(" obj: - 2.5 x0 + 1 x2 + 0.25 x5\n") != std::string::npos);
  CHECK(text.find(" cap_0: + 1 x0 - 3 x2 + 0.5 x5 <= 7.25\n") != std::string::npos);
  CHECK(text.find(" c_1: - 1 x1 + 1 x4 = 0\n") != std::string::npos);
  CHECK(text.find(" x1 free\n") != std::string::npos);
  CHECK(text.find(" -inf <= x2 <= 4\n") != std::string::npos);
  CHECK(text.find(" x3 >= 2\n") != std::string::npos);
  CHECK(text.find(" x4 = 3\n") != std::string::npos);
  CHECK(text.find(" -1 <= x5 <= 2\n") != std::string::npos);
  CHECK(text.find("Binary\n x0\n") != std::string::npos);
  CHECK(text.find("End\n") != std::string::npos);
}

TEST_CASE("long expressions wrap at eight terms") {
  MipModel m;
  MipRow r;
  for (int j = 0; j < 12; ++j) {
    m.add_var(0.0, 1.0, 1.0);
    r.idx.push_back(j);
    r.coef.push_back(1.0);
  }
  r.sense = RowSense::le;
  r.rhs = 6.0;
  r.tag = "wide";
  m.add_row(std::move(r));
  const std::string text = lp_format_text(m);
  // Both the objective and the row break after the eighth term.
  CHECK(text.find(" + 1 x7\n      + 1 x8") != std::string::npos);
  const MipModel back = parse_lp(text);
  CHECK(back.rows.size() == 1);
  CHECK(back.rows[0].idx.size() == 12);
}

TEST_CASE("binary list wraps at sixteen names") {
  MipModel m;
  for (int j = 0; j < 20; ++j) m.add_var(0.0, 1.0, 1.0, true);
  const std::string text = lp_format_text(m);
  const std::string expect =
      "Binary\n"
      " x0 x1 x2 x3 x4 x5 x6 x7 x8 x9 x10 x11 x12 x13 x14 x15\n"
      " x16 x17 x18 x19\n";
  CHECK(text.find(expect) != std::string::npos);
  const MipModel back = parse_lp(text);
  CHECK(back.n_binaries() == 20);
}

TEST_CASE("zero coefficients are omitted") {
  MipModel m;
  m.add_var(0.0, 1.0, 0.0);
  m.add_var(0.0, 1.0, 1.0);
  m.add_row(row({0, 1}, {0.0, 2.0}, RowSense::le, 2.0, "z"));
  const std::string text = lp_format_text(m);
  CHECK(text.find(" z_0: + 2 x1 <= 2\n") != std::string::npos);
  CHECK(text.find("0 x0") == std::string::npos);  // no "+ 0 x0" term anywhere
}

TEST_CASE("random models round-trip through the text form") {
  std::mt19937 rng(31415);
  std::uniform_int_distribution<int> n_pick(1, 6);
  std::uniform_int_distribution<int> rows_pick(0, 5);
  std::uniform_int_distribution<int> coef(-3, 3);
  std::uniform_int_distribution<int> kind(0, 4);
  std::uniform_real_distribution<double> real_coef(-2.0, 2.0);

  for (int trial = 0; trial < 60; ++trial) {
    MipModel m;
    const int n = n_pick(rng);
    for (int j = 0; j < n; ++j) {
      switch (kind(rng)) {
        case 0: m.add_var(0.0, 1.0, coef(rng), true); break;
        case 1: m.add_var(-kInf, kInf, real_coef(rng)); break;
        case 2: m.add_var(-2.0, 5.0, real_coef(rng)); break;
        case 3: m.add_var(0.0, kInf, coef(rng)); break;
        default: m.add_var(1.5, 1.5, real_coef(rng)); break;
      }
    }
    const int rows = rows_pick(rng);
    for (int i = 0; i < rows; ++i) {
      MipRow r;
      for (int j = 0; j < n; ++j) {
        const double a = real_coef(rng);
        if (std::abs(a) < 0.2) continue;
        r.idx.push_back(j);
        r.coef.push_back(a);
      }
      if (r.idx.empty()) continue;
      r.sense = static_cast<RowSense>(i % 3);
      r.rhs = real_coef(rng);
      r.tag = "r";
      m.add_row(std::move(r));
    }
    if (trial % 3 == 0) m.objective_offset = real_coef(rng);

    const std::string text = lp_format_text(m);
    const MipModel back = parse_lp(text);
    CAPTURE(trial);
    REQUIRE(back.n_vars == m.n_vars);
    REQUIRE(back.rows.size() == m.rows.size());
    CHECK(back.n_binaries() == m.n_binaries());
    CHECK(back.objective_offset ==
          doctest::Approx(m.objective_offset).epsilon(1e-9));
    // Infinite bounds must round-trip exactly; Approx cannot compare them.
    auto bound_close = [](double got, double want) {
      if (std::isinf(want) || std::isinf(got)) return got == want;
      return std::abs(got - want) <= 1e-9 * std::max(1.0, std::abs(want));
    };
    for (int j = 0; j < m.n_vars; ++j) {
      CHECK(bound_close(back.lower[j], m.lower[j]));
      CHECK(bound_close(back.upper[j], m.upper[j]));
      CHECK(back.objective[j] == doctest::Approx(m.objective[j]).epsilon(1e-9));
    }
    for (std::size_t i = 0; i < m.rows.size(); ++i) {
      const MipRow& a = m.rows[i];
      const MipRow& b = back.rows[i];
      REQUIRE(b.idx.size() == a.idx.size());
      CHECK(b.sense == a.sense);
      CHECK(b.rhs == doctest::Approx(a.rhs).epsilon(1e-9));
      CHECK(b.tag == a.tag);
      for (std::size_t k = 0; k < a.idx.size(); ++k) {
        CHECK(b.idx[k] == a.idx[k]);
        CHECK(b.coef[k] == doctest::Approx(a.coef[k]).epsilon(1e-9));
      }
    }

    // The parsed model must behave identically as an LP.
    const SolveResult ra = solve_lp(m);
    const SolveResult rb = solve_lp(back);
    CHECK(ra.status == rb.status);
    if (ra.status == SolveStatus::optimal)
      CHECK(ra.objective == doctest::Approx(rb.objective).epsilon(1e-9));
  }
}

TEST_CASE("export writes the exact text and reports IO failures") {
  MipModel m;
  const int x = m.add_var(0.0, 2.0, 1.0);
  m.add_row(row({x}, {1.0}, RowSense::ge, 1.0, "c"));

  const std::string path =
      (std::filesystem::temp_directory_path() / "flexcomm_lp_test.lp").string();
  export_lp_file(m, path);
  std::ifstream in(path, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  CHECK(buf.str() == lp_format_text(m));
  std::filesystem::remove(path);

  CHECK_THROWS_AS(export_lp_file(m, "/nonexistent-dir/out.lp"), IoError);
}
