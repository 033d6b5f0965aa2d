// Copyright (c) 2026 The torsift authors
// SPDX-License-Identifier: Apache-2.0
//
// Deterministic report rendering. The machine format is schema-versioned
// JSON with decimal offsets, hex-encoded raw bytes and lowercase hex
// SHA-256 digests; the human format is a sectioned plain-text summary.

#include <filesystem>
#include <sstream>

#include <json.hpp>

#include "torsift/errors.hpp"
#include "torsift/pipeline.hpp"

namespace torsift::pipeline {

namespace {

const char* evidence_kind_name(EvidenceRef::Kind k) {
  switch (k) {
    case EvidenceRef::Kind::Stream: return "stream";
    case EvidenceRef::Kind::Registry: return "registry";
    case EvidenceRef::Kind::RegistryAbsent: return "registry_absent";
  }
  return "stream";
}

nlohmann::ordered_json evidence_json(const EvidenceRef& ev) {
  nlohmann::ordered_json j;
  j["source_id"] = ev.source_id;
  j["kind"] = evidence_kind_name(ev.kind);
  if (ev.kind != EvidenceRef::Kind::Stream) {
    j["key_path"] = ev.key_path;
    if (ev.kind == EvidenceRef::Kind::Registry) j["value_name"] = ev.value_name;
  }
  j["offset"] = ev.offset;
  j["length"] = ev.length;
  j["sha256"] = ev.sha256;
  j["decode"] = ev.decode;
  j["text"] = ev.text;
  return j;
}

std::string render_machine(const ForensicReport& report) {
  nlohmann::ordered_json j;
  j["schema_version"] = report.schema_version;
  j["case_id"] = report.case_id;
  j["tool_version"] = report.tool_version;
  j["generated_at"] = report.generated_at;
  j["inputs"] = nlohmann::ordered_json::array();
  for (const auto& input : report.inputs) {
    nlohmann::ordered_json ij;
    ij["source_id"] = input.source_id;
    ij["role"] = input.role;
    ij["sha256"] = input.sha256;
    ij["length"] = input.length;
    j["inputs"].push_back(std::move(ij));
  }
  j["findings"] = nlohmann::ordered_json::array();
  for (const auto& f : report.findings) {
    nlohmann::ordered_json fj;
    fj["category"] = category_name(f.category);
    fj["confidence"] = confidence_name(f.confidence);
    fj["evidence"] = nlohmann::ordered_json::array();
    for (const auto& ev : f.evidence) fj["evidence"].push_back(evidence_json(ev));
    fj["timestamps"] = f.timestamps;
    fj["annotations"] = f.annotations;
    j["findings"].push_back(std::move(fj));
  }
  j["skipped_steps"] = nlohmann::ordered_json::array();
  for (const auto& s : report.skipped_steps) {
    nlohmann::ordered_json sj;
    sj["step"] = s.step;
    sj["reason"] = s.reason;
    j["skipped_steps"].push_back(std::move(sj));
  }
  return j.dump(2) + "\n";
}

const char* category_heading(Category c) {
  switch (c) {
    case Category::TorPresence: return "TOR PRESENCE";
    case Category::TorPortableMode: return "TOR PORTABLE MODE";
    case Category::BrowsingActivity: return "BROWSING ACTIVITY";
    case Category::BridgingEndpoint: return "BRIDGING ENDPOINTS";
    case Category::AudioCorroboration: return "AUDIO CORROBORATION";
    case Category::FirefoxPrivateActivity: return "FIREFOX PRIVATE ACTIVITY";
    case Category::EnvironmentNote: return "ENVIRONMENT NOTES";
  }
  return "FINDINGS";
}

std::string render_human(const ForensicReport& report) {
  std::ostringstream out;
  out << "torsift forensic report\n";
  out << "=======================\n";
  out << "case:      " << report.case_id << "\n";
  out << "generated: " << report.generated_at << "\n";
  out << "tool:      " << report.tool_version << "\n";
  out << "schema:    " << report.schema_version << "\n\n";

  out << "inputs\n------\n";
  for (const auto& input : report.inputs) {
    out << "  " << input.source_id << " (" << input.role << ", " << input.length
        << " bytes)\n    sha256 " << input.sha256 << "\n";
  }
  out << "\n";

  if (report.findings.empty()) {
    out << "findings\n--------\n  none\n";
  } else {
    Category last = Category::EnvironmentNote;
    bool first = true;
    for (const auto& f : report.findings) {
      if (first || f.category != last) {
        out << category_heading(f.category) << "\n";
        for (size_t i = 0; i < std::string(category_heading(f.category)).size(); ++i) {
          out << '-';
        }
        out << "\n";
        last = f.category;
        first = false;
      }
      out << "  [" << confidence_name(f.confidence) << "]\n";
      for (const auto& ev : f.evidence) {
        out << "    " << ev.source_id << " ";
        if (ev.kind == EvidenceRef::Kind::Stream) {
          out << "offset " << ev.offset << " len " << ev.length;
        } else {
          out << ev.key_path;
          if (!ev.value_name.empty()) out << " value \"" << ev.value_name << "\"";
          if (ev.kind == EvidenceRef::Kind::Registry) {
            out << " offset " << ev.offset << " len " << ev.length;
          }
        }
        out << "\n      sha256 " << ev.sha256 << "\n";
        if (!ev.text.empty()) out << "      text: " << ev.text << "\n";
      }
      for (const auto& ts : f.timestamps) out << "    when: " << ts << "\n";
      for (const auto& a : f.annotations) out << "    note: " << a << "\n";
      out << "\n";
    }
  }

  out << "skipped steps\n-------------\n";
  if (report.skipped_steps.empty()) {
    out << "  none\n";
  } else {
    for (const auto& s : report.skipped_steps) {
      out << "  " << s.step << ": " << s.reason << "\n";
    }
  }
  return out.str();
}

}  // namespace

std::string render_report(const ForensicReport& report, ReportFormat format) {
  return format == ReportFormat::Machine ? render_machine(report) : render_human(report);
}

CaseConfig load_case_config(std::string_view json_text, const std::string& base_dir) {
  nlohmann::json j = nlohmann::json::parse(json_text, nullptr, false);
  if (j.is_discarded() || !j.is_object()) {
    raise(errc::invalid_config, "case config is not a JSON object");
  }
  CaseConfig config;
  config.case_id = j.value("case_id", std::string("case"));
  if (!j.contains("sources") || !j["sources"].is_array() || j["sources"].empty()) {
    raise(errc::invalid_config, "case config needs a non-empty sources array");
  }
  for (const auto& entry : j["sources"]) {
    if (!entry.is_object() || !entry.contains("path") || !entry["path"].is_string()) {
      raise(errc::invalid_config, "each source needs a path");
    }
    std::string path = entry["path"].get<std::string>();
    if (!base_dir.empty() && std::filesystem::path(path).is_relative()) {
      path = (std::filesystem::path(base_dir) / path).string();
    }
    const std::string role_text = entry.value("role", std::string("raw"));
    SourceRole role;
    if (role_text == "hive") {
      role = SourceRole::Hive;
    } else if (role_text == "memory") {
      role = SourceRole::Memory;
    } else if (role_text == "raw") {
      role = SourceRole::Raw;
    } else {
      raise(errc::invalid_config, "unknown source role: " + role_text);
    }
    std::string id = entry.value("id", std::filesystem::path(path).filename().string());
    config.sources.push_back(CaseSource::from_file(std::move(id), role, std::move(path)));
  }
  return config;
}

}  // namespace torsift::pipeline
