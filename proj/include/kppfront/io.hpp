#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include <json.hpp>

#include "kppfront/frontsolver.hpp"
#include "kppfront/pdesim.hpp"
#include "kppfront/verify.hpp"

namespace kppfront {

using Json = nlohmann::ordered_json;

namespace io {

/// 17 significant digits, so every double survives a text round trip.
/// Non-finite values print as "nan", "inf" or "-inf".
std::string format_double(double v);

/// Deterministic JSON text: insertion-ordered keys, two-space indent, floats at
/// 17 significant digits, non-finite floats as null. Arrays of scalars stay on
/// one line.
std::string dump_json(const Json& j);

Json to_json(const ModelParams& p);
Json to_json(const Equilibrium& e);
Json to_json(const ShootingConfig& cfg);
/// Metadata plus the sampled arrays (zeta, one array per component).
Json to_json(const FrontProfile& p);
Json to_json(const SweepResult& r);
Json to_json(const verify::AuditReport& r);
Json to_json(const verify::TrappingReport& r);
/// Manifest only: params, grid, frame, times, step data. Snapshot values go to CSV.
Json manifest_json(const SpaceTimeField& f);

/// Header "zeta,<components...>", one row per sample. `delim` ' ' gives the
/// whitespace-delimited plot variant (header prefixed with '#').
void write_profile_csv(std::ostream& os, const FrontProfile& p, char delim = ',');
/// Reads a profile CSV back. Slopes are left empty; the first and last rows
/// stand in for the endpoint equilibria.
FrontProfile read_profile_csv(std::istream& is);

/// Columns x,u,w for snapshot k.
void write_snapshot_csv(std::ostream& os, const SpaceTimeField& f, std::size_t k, char delim = ',');
/// Columns <parameter>,sup_distance,captured,residual.
void write_sweep_csv(std::ostream& os, const SweepResult& r, char delim = ',');

/// Throws IoError when the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& text);
std::string read_file(const std::filesystem::path& path);

}  // namespace io
}  // namespace kppfront
