#pragma once

#include <vector>

#include "heraldq/fock_core.hpp"

namespace heraldq::detail {

/// Which block of the amplitude matrix to evaluate: rows
/// [row_first, row_last], columns [0, col_max].
struct ContractionRequest {
  double r = 0.0;
  double alpha = 0.0;
  int row_first = 0;
  int row_last = 0;
  int col_max = 0;
};

struct Contraction {
  int row_first = 0;
  int rows = 0;
  int cols = 0;
  std::vector<double> values;  ///< rows x cols, row-major
  int inner_cutoff = 0;
  Arithmetic arithmetic = Arithmetic::binary64;
  double cancellation_bound = 0.0;

  double at(int n1, int n2) const {
    return values[static_cast<std::size_t>(n1 - row_first) *
                      static_cast<std::size_t>(cols) +
                  static_cast<std::size_t>(n2)];
  }
};

/// Evaluates sum_{l,k} S^ab_{n1 n2, l k} C_l C_k over the requested block.
///
/// The first pass runs in binary64 with every term built in log space and
/// records sum |term| for each entry. If that bound says rounding would
/// exceed ~1e-13 absolute, the block is recomputed in 50- or 100-digit
/// binary floating point.
Contraction contract(const ContractionRequest& request);

/// |<m| S(-r) D(alpha) |0>|^2, the photon-number distribution of the light
/// entering port a, out to where it drops below ~1e-44. The beam splitter
/// conserves total photon number, so this fixes how much mass any (n1, n2)
/// box can hold.
std::vector<double> input_number_distribution(double r, double alpha);

}  // namespace heraldq::detail
