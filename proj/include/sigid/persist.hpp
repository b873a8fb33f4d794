#pragma once

#include <json.hpp>

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "sigid/config.hpp"
#include "sigid/dataset.hpp"
#include "sigid/identification.hpp"

// JSON persistence for every artifact the pipeline exchanges. Files carry a
// schema name and version; loading a file with an unexpected version raises
// SchemaVersionMismatch naming both versions. Writes are whole-file atomic
// (temp file + rename) and byte-deterministic (sorted keys, round-trip float
// formatting).

namespace sigid {

inline constexpr int kSchemaVersion = 1;

std::string serialize_gallery(const Gallery& g);
std::string serialize_model(const SvmModel& m);
std::string serialize_report(const Report& r, const RunConfig& cfg);
std::string serialize_manifest(const DatasetManifest& m);
std::string serialize_config(const RunConfig& cfg);

void save_gallery(const Gallery& g, const std::filesystem::path& path);
Gallery load_gallery(const std::filesystem::path& path);

void save_model(const SvmModel& m, const std::filesystem::path& path);
SvmModel load_model(const std::filesystem::path& path);

void save_report(const Report& r, const RunConfig& cfg, const std::filesystem::path& path);
Report load_report(const std::filesystem::path& path);

void save_manifest(const DatasetManifest& m, const std::filesystem::path& path);
// root is taken from the manifest file's directory.
DatasetManifest load_manifest(const std::filesystem::path& path);

void save_config(const RunConfig& cfg, const std::filesystem::path& path);
// Missing keys keep their defaults, so partial config files are fine.
RunConfig load_config(const std::filesystem::path& path);
RunConfig config_from_json_text(const std::string& text, const std::string& origin);

// One row per signature: subject id plus the 173 schema-named columns.
void write_features_csv(const std::vector<std::pair<std::string, FeatureVector>>& rows,
                        const std::filesystem::path& path);

nlohmann::json feature_vector_to_json(const FeatureVector& fv);

// rank,p_fused,p_ed,p_md,p_ge
void write_cmc_csv(const Report& r, const std::filesystem::path& path);
void write_cmc_svg(const Report& r, const std::filesystem::path& path);

}  // namespace sigid
