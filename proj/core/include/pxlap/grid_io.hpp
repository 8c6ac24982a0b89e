#pragma once

// Serialization of grid functions.
//
// CSV: header `x,value` (1D) or `x,y,value` (2D), one row per node in flat
// order, numbers printed with 17 significant digits.
//
// Binary dump, all fields little-endian:
//   char[4]  magic "PXGF"
//   uint32   format version (1)
//   uint32   dim
//   float64  lower[dim]
//   float64  upper[dim]
//   uint32   n[dim]            interior counts; nodes per axis = n + 2
//   float64  values[nodes]     flat order, axis 0 fastest
//   uint8    kinds[nodes]      0 interior, 1 boundary, 2 exterior

#include <iosfwd>
#include <string>

#include "pxlap/grid.hpp"

namespace pxlap {

void write_csv(std::ostream& os, const GridFunction& u);
void write_csv(const std::string& path, const GridFunction& u);

void write_binary(std::ostream& os, const GridFunction& u);
void write_binary(const std::string& path, const GridFunction& u);
GridFunction read_binary(std::istream& is);
GridFunction read_binary(const std::string& path);

/// Formats a double with round-trip precision; shared by all CSV writers.
std::string format_number(double v);

}  // namespace pxlap
