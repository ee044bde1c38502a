/// @file io.hpp
/// @brief Binary field dumps ("PWV1") and their text sidecars.
///
/// Layout: magic "PWV1", then little-endian uint32 N1, N2, component count,
/// then little-endian binary64 values, j outer, i inner, component innermost.
#pragma once

#include "pw/solver.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace pw {

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct FieldDump {
  std::uint32_t N1 = 0, N2 = 0, components = 0;
  std::vector<double> values;  ///< N1 * N2 * components

  double at(std::uint32_t i, std::uint32_t j, std::uint32_t k) const {
    return values[(static_cast<size_t>(j) * N1 + i) * components + k];
  }
};

void write_field(const std::string& path, const FieldDump& f);
FieldDump read_field(const std::string& path);

/// Interior cells of the state, 8 components.
FieldDump state_dump(const SimulationState& s);
/// Per-cell energy density 0.5 q^T E q, 1 component.
FieldDump energy_dump(const SimulationState& s);

/// Sidecar "<path>.meta": one "key = value" per line.
void write_sidecar(const std::string& path, const std::map<std::string, std::string>& entries);
std::map<std::string, std::string> read_sidecar(const std::string& path);

/// Writes <prefix>.state.pwv, <prefix>.energy.pwv and a sidecar for the state
/// (mapping, time, material map path). Returns the state path.
std::string dump_field(const SimulationState& s, const std::string& prefix, const std::string& material_map_path = "");

/// Writes <prefix>.vertices.pwv ((N1+1) x (N2+1) x 2), <prefix>.kappa.pwv and
/// <prefix>.material.pwv (N1 x N2 x 1) plus a sidecar; returns the material map path.
std::string dump_grid(const MappedGrid& g, const std::string& prefix);

std::map<std::string, std::string> mapping_metadata(const GridMapping& m);

}  // namespace pw
