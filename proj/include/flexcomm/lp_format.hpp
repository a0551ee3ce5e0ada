#pragma once

// Writer for the classic LP interchange text format (Minimize / Subject To /
// Bounds / Binary / End), so models can be inspected or cross-checked with
// external solvers.

#include <string>

#include "flexcomm/core.hpp"
#include "flexcomm/mip.hpp"

namespace flexcomm {

/// Renders `model` as LP-format text.
///
/// Layout rules (kept deliberately rigid so output is byte-reproducible):
///  - variables are named `x<id>`; constraints `<tag>_<row index>` (tag `c`
///    when a row carries none);
///  - every term is written as `+ <coef> x<id>` or `- <coef> x<id>` with the
///    coefficient magnitude printed to 12 significant digits; zero
///    coefficients are skipped;
///  - at most 8 terms per line, continuations indented by six spaces;
///  - every variable gets an explicit Bounds line; the Binary section is
///    present only when the model has binaries;
///  - a nonzero objective offset is recorded up front as a `\` comment.
std::string lp_format_text(const MipModel& model);

/// Writes `lp_format_text(model)` to `path`. Throws IoError on I/O failure.
void export_lp_file(const MipModel& model, const std::string& path);

}  // namespace flexcomm
