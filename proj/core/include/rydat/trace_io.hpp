#pragma once

#include <string>

#include "rydat/spectrum.hpp"

namespace rydat {

/// Serialise a trace as two-column delimited text with a typed header
/// (x unit, value kind, instrument stage). Detunings are written in MHz.
/// Writes are atomic (temp file + rename).
void write_trace(const std::string& path, const SpectrumTrace& trace);
std::string trace_to_string(const SpectrumTrace& trace);

/// Parse a trace file; accepts x_unit MHz or rad/s, requires the typed
/// header, strictly increasing detunings, and exactly two columns per row.
/// Errors carry line numbers.
SpectrumTrace read_trace(const std::string& path);
SpectrumTrace trace_from_string(const std::string& text, const std::string& origin = "<string>");

/// Absorption-image I/O. Two formats, chosen by extension:
///  *.pgm  portable graymap (P2, 16-bit), pixel scale in a '# pixel_um' comment
///  *.tsv  delimited matrix with a '# pixel_um = dx dy' header
void write_image(const std::string& path, const TransmissionImage& image);
TransmissionImage read_image(const std::string& path);

/// Atomic text-file write helper used by everything that persists results.
void write_file_atomic(const std::string& path, const std::string& content);

} // namespace rydat
