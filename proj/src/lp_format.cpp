#include "flexcomm/lp_format.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <vector>

namespace flexcomm {

namespace {

constexpr int kTermsPerLine = 8;
constexpr int kBinariesPerLine = 16;

std::string fmt(double v) {
  if (v == 0.0) v = 0.0;  // normalize -0
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

// Appends `+ c x<i>` / `- c x<i>` terms, wrapping long expressions.
void append_terms(std::string& out, const std::vector<int>& idx,
                  const std::vector<double>& coef) {
  int written = 0;
  for (std::size_t k = 0; k < idx.size(); ++k) {
    if (coef[k] == 0.0) continue;
    if (written > 0 && written % kTermsPerLine == 0) out += "\n     ";
    out += coef[k] < 0 ? " - " : " + ";
    out += fmt(std::abs(coef[k]));
    out += " x";
    out += std::to_string(idx[k]);
    ++written;
  }
}

}  // namespace

std::string lp_format_text(const MipModel& model) {
  model.validate();
  std::string out;
  if (model.objective_offset != 0.0)
    out += "\\ objective offset " + fmt(model.objective_offset) + "\n";

  out += "Minimize\n obj:";
  {
    std::vector<int> idx(model.n_vars);
    std::vector<double> coef(model.n_vars);
    for (int j = 0; j < model.n_vars; ++j) {
      idx[j] = j;
      coef[j] = model.objective[j];
    }
    append_terms(out, idx, coef);
  }
  out += "\nSubject To\n";
  for (std::size_t r = 0; r < model.rows.size(); ++r) {
    const MipRow& row = model.rows[r];
    out += " ";
    out += row.tag.empty() ? "c" : row.tag;
    out += "_" + std::to_string(r) + ":";
    append_terms(out, row.idx, row.coef);
    switch (row.sense) {
      case RowSense::le: out += " <= "; break;
      case RowSense::eq: out += " = "; break;
      case RowSense::ge: out += " >= "; break;
    }
    out += fmt(row.rhs) + "\n";
  }

  out += "Bounds\n";
  for (int j = 0; j < model.n_vars; ++j) {
    const double lo = model.lower[j];
    const double hi = model.upper[j];
    const std::string name = "x" + std::to_string(j);
    if (lo == hi) {
      out += " " + name + " = " + fmt(lo) + "\n";
    } else if (lo == -kInf && hi == kInf) {
      out += " " + name + " free\n";
    } else if (lo == -kInf) {
      out += " -inf <= " + name + " <= " + fmt(hi) + "\n";
    } else if (hi == kInf) {
      out += " " + name + " >= " + fmt(lo) + "\n";
    } else {
      out += " " + fmt(lo) + " <= " + name + " <= " + fmt(hi) + "\n";
    }
  }

  if (model.n_binaries() > 0) {
    out += "Binary\n";
    int written = 0;
    for (int j = 0; j < model.n_vars; ++j) {
      if (!model.binary[j]) continue;
      out += written % kBinariesPerLine == 0 ? (written ? "\n x" : " x") : " x";
      out += std::to_string(j);
      ++written;
    }
    out += "\n";
  }
  out += "End\n";
  return out;
}

void export_lp_file(const MipModel& model, const std::string& path) {
  const std::string text = lp_format_text(model);
  std::ofstream ofs(path, std::ios::binary);
  if (!ofs) throw IoError("cannot open for writing: " + path);
  ofs.write(text.data(), static_cast<std::streamsize>(text.size()));
  ofs.flush();
  if (!ofs.good()) throw IoError("write failed: " + path);
}

}  // namespace flexcomm
