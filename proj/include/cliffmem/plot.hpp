#pragma once
// Deterministic SVG rendering of sweep tables. The output is a pure
// function of the input rows (fixed-point coordinate formatting, no
// timestamps), so repeated renders are byte-identical.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cliffmem/sweep.hpp"

namespace cliffmem {

enum class PlotKind {
  kSurvivalVsDepth,  // log-scale survival curves with confidence bands
  kDstarVsN,         // fitted memory-loss depth against qubit count
};

std::optional<PlotKind> plot_kind_from_name(std::string_view name);
std::string_view plot_kind_name(PlotKind kind);

// Renders the table to a self-contained SVG document. Series are grouped
// per (family, n, gamma) for survival curves and per (family, gamma) for
// the scaling plot; `epsilon` is the survival threshold defining the
// fitted memory-loss depth. Throws std::invalid_argument on an empty
// table or when the scaling plot cannot fit any series.
std::string render_plot(const std::vector<SweepRow>& rows, PlotKind kind,
                        double epsilon = 0.01);

}  // namespace cliffmem
