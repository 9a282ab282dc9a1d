#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "boundarykit/calibrate.hpp"
#include "boundarykit/detector.hpp"
#include "boundarykit/patches.hpp"
#include "boundarykit/point_cloud.hpp"
#include "boundarykit/synth.hpp"

// JSON and CSV emission for every result type, plus loaders used by the
// round-trip tests and a structural validator for the shipped schemas.

namespace boundarykit {

nlohmann::json boundary_to_json(const BoundaryResult& result, const PointCloud& cloud);
// one row per cloud point: index, is_boundary, rho_i, eta_0..eta_{D-1}
void write_boundary_csv(const BoundaryResult& result, const PointCloud& cloud,
                        const std::string& path);

nlohmann::json calibration_to_json(const CalibrationReport& report);
// (pair distance, tangential ratio) rows
void write_distortion_csv(const CalibrationReport& report, const std::string& path);
// (rank, radius) rows, ascending
void write_radii_csv(const CalibrationReport& report, const std::string& path);

nlohmann::json patches_to_json(const PatchComplex& complex);
nlohmann::json hausdorff_to_json(const HausdorffReport& report);

// sidecar written next to a sampled cloud CSV
nlohmann::json sample_sidecar(const SyntheticManifold& manifold, int n, std::uint64_t seed);

void save_json(const nlohmann::json& doc, const std::string& path);
nlohmann::json load_json(const std::string& path);

// numeric table loader for CSV round-trip checks
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};
CsvTable read_csv_table(const std::string& path);

// Structural check against the subset of JSON Schema the shipped schemas
// use: type, properties, required, items, enum.  Throws IoError with the
// offending path on mismatch.
void validate_schema(const nlohmann::json& doc, const nlohmann::json& schema);

}  // namespace boundarykit
