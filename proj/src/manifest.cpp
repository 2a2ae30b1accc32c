#include "putforge/manifest.hpp"

#include <openssl/evp.h>

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace putforge {

using ordered_json = nlohmann::ordered_json;

namespace {

std::uint64_t parse_seed(const ordered_json& j, const char* key) {
  const auto& v = j.at(key);
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  const auto s = v.get<std::string>();
  std::uint64_t out = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  if (ec != std::errc{} || ptr != s.data() + s.size()) throw Error(std::string("manifest: bad seed in ") + key);
  return out;
}

ordered_json ranges_json(const Ranges& ranges) {
  ordered_json j = ordered_json::object();
  for (const auto& [key, r] : ranges.entries()) j[key] = {{"min", r.min}, {"max", r.max}};
  return j;
}

Ranges ranges_from(const ordered_json& j) {
  if (!j.is_object()) throw Error("ranges: expected a JSON object");
  Ranges r;
  for (const auto& [key, v] : j.items()) r.set(key, {v.at("min").get<std::int64_t>(), v.at("max").get<std::int64_t>()});
  r.check();
  return r;
}

ordered_json record_json(const ManifestRecord& r) {
  ordered_json j;
  j["index"] = r.index;
  j["childSeed"] = std::to_string(r.child_seed);
  j["specText"] = r.spec_text;
  j["argvArity"] = r.argv_arity;
  j["trigger"] = r.trigger;
  j["nonTrigger"] = r.non_trigger ? ordered_json(*r.non_trigger) : ordered_json(nullptr);
  j["bugKind"] = bug_kind_name(r.bug_kind);
  j["bugLine"] = r.bug_line;
  j["sourcePath"] = r.source_path;
  j["sourceSha256"] = r.source_sha256;
  j["metrics"] = {{"cyclomatic", r.metrics.cyclomatic},
                  {"pathStatements", r.metrics.path_statements},
                  {"transformationCount", r.metrics.transformation_count}};
  j["status"] = r.ok ? "ok" : "error";
  j["error"] = r.ok ? ordered_json(nullptr) : ordered_json(r.error);
  return j;
}

ManifestRecord record_from(const ordered_json& j) {
  ManifestRecord r;
  r.index = j.at("index").get<std::size_t>();
  r.child_seed = parse_seed(j, "childSeed");
  r.spec_text = j.at("specText").get<std::string>();
  r.argv_arity = j.at("argvArity").get<int>();
  r.trigger = j.at("trigger").get<std::vector<std::string>>();
  if (!j.at("nonTrigger").is_null()) r.non_trigger = j.at("nonTrigger").get<std::vector<std::string>>();
  const auto bug = bug_kind_from_name(j.at("bugKind").get<std::string>());
  if (!bug) throw Error("manifest: unknown bugKind");
  r.bug_kind = *bug;
  r.bug_line = j.at("bugLine").get<int>();
  r.source_path = j.at("sourcePath").get<std::string>();
  r.source_sha256 = j.at("sourceSha256").get<std::string>();
  const auto& m = j.at("metrics");
  r.metrics = {m.at("cyclomatic").get<std::int64_t>(), m.at("pathStatements").get<std::int64_t>(),
               m.at("transformationCount").get<std::int64_t>()};
  const auto status = j.at("status").get<std::string>();
  if (status != "ok" && status != "error") throw Error("manifest: unknown status '" + status + "'");
  r.ok = status == "ok";
  if (!r.ok) r.error = j.at("error").get<std::string>();
  return r;
}

}  // namespace

std::string manifest_to_json(const Manifest& m) {
  ordered_json j;
  j["formatVersion"] = m.format_version;
  j["generatorVersion"] = m.generator_version;
  j["batch"] = m.batch;
  j["masterSeed"] = std::to_string(m.master_seed);
  j["rngAlgorithm"] = m.rng_algorithm;
  j["argvPolicy"] = m.argv_policy;
  j["ranges"] = ranges_json(m.ranges);
  j["records"] = ordered_json::array();
  for (const auto& r : m.records) j["records"].push_back(record_json(r));
  return j.dump(2) + "\n";
}

Manifest manifest_from_json(std::string_view text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("manifest: malformed JSON: ") + e.what());
  }
  try {
    Manifest m;
    m.format_version = j.at("formatVersion").get<int>();
    if (m.format_version > kManifestFormatVersion)
      throw VersionError("manifest formatVersion " + std::to_string(m.format_version) +
                         " is newer than supported version " + std::to_string(kManifestFormatVersion));
    if (m.format_version < 1) throw VersionError("manifest formatVersion must be >= 1");
    m.generator_version = j.at("generatorVersion").get<std::string>();
    m.batch = j.at("batch").get<std::string>();
    m.master_seed = parse_seed(j, "masterSeed");
    m.rng_algorithm = j.at("rngAlgorithm").get<std::string>();
    m.argv_policy = j.at("argvPolicy").get<std::string>();
    m.ranges = ranges_from(j.at("ranges"));
    for (const auto& r : j.at("records")) m.records.push_back(record_from(r));
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("manifest: ") + e.what());
  }
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  write_text_file(path, manifest_to_json(manifest));
}

Manifest read_manifest(const std::filesystem::path& path) { return manifest_from_json(read_text_file(path)); }

std::string ranges_to_json(const Ranges& ranges) { return ranges_json(ranges).dump(2) + "\n"; }

Ranges ranges_from_json(std::string_view text) {
  try {
    return ranges_from(ordered_json::parse(text));
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("ranges: ") + e.what());
  }
}

Ranges read_ranges(const std::filesystem::path& path) { return ranges_from_json(read_text_file(path)); }

std::string sha256_hex(std::string_view data) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += kHex[digest[i] >> 4];
    out += kHex[digest[i] & 0xf];
  }
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw Error("write failed for " + path.string());
}

}  // namespace putforge
