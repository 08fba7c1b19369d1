#pragma once

#include <cstddef>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "mfcz/grid_signal.hpp"
#include "mfcz/variation.hpp"

namespace mfcz {

/// Malformed input file. row() is the 1-based line number (header = 1).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t row, const std::string& what);
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

// Signal CSV: header `x,re,im`, one row per grid point, equispaced x.
SampledSignal read_signal_csv(std::istream& in);
SampledSignal read_signal_csv(const std::string& path);
void write_signal_csv(std::ostream& out, const SampledSignal& f);
void write_signal_csv(const std::string& path, const SampledSignal& f);

// Sequence CSV: header `k,v1,...,vd` for real values, or
// `k,v1_re,v1_im,...,vd_re,vd_im` for complex values.
VectorSequence read_sequence_csv(std::istream& in);
VectorSequence read_sequence_csv(const std::string& path);
void write_sequence_csv(std::ostream& out, const VectorSequence& s);
void write_sequence_csv(const std::string& path, const VectorSequence& s);

}  // namespace mfcz
