#include "personrec/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace personrec {

using Json = nlohmann::ordered_json;

Rates compute_rates(std::uint64_t true_positives, std::uint64_t recommendations,
                    std::uint64_t relevant) {
  Rates r;
  const auto tp = static_cast<double>(true_positives);
  if (recommendations > 0) r.precision = tp / static_cast<double>(recommendations);
  if (relevant > 0) r.recall = tp / static_cast<double>(relevant);
  if (r.precision + r.recall > 0.0) {
    r.f_measure = 2.0 * r.precision * r.recall / (r.precision + r.recall);
  }
  return r;
}

const MethodSummary* EvalReport::find_summary(const std::string& method) const {
  for (const auto& s : summary) {
    if (s.method == method) return &s;
  }
  return nullptr;
}

const std::string* EvalReport::find_metadata(const std::string& key) const {
  for (const auto& [k, v] : metadata) {
    if (k == key) return &v;
  }
  return nullptr;
}

namespace {

Json rates_json(const Rates& r) {
  return Json{{"precision", r.precision}, {"recall", r.recall}, {"f_measure", r.f_measure}};
}

Rates rates_from(const Json& j) {
  return {j.at("precision").get<double>(), j.at("recall").get<double>(),
          j.at("f_measure").get<double>()};
}

}  // namespace

void write_report(const EvalReport& report, std::ostream& out) {
  Json meta{{"type", "meta"}};
  Json fields = Json::object();
  for (const auto& [k, v] : report.metadata) fields[k] = v;
  meta["fields"] = std::move(fields);
  out << meta.dump() << '\n';

  for (const auto& r : report.runs) {
    Json j{{"type", "run"},
           {"run", r.run},
           {"method", r.method},
           {"evaluated_cases", r.evaluated_cases},
           {"total_recommendations", r.recommendations},
           {"true_positives", r.true_positives},
           {"false_positives", r.false_positives},
           {"false_negatives", r.false_negatives},
           {"deleted_pairs", r.deleted_pairs},
           {"deleted_edges", r.deleted_edges},
           {"reproduced_edges", r.reproduced_edges},
           {"beyond_fof", r.beyond_fof},
           {"rates", rates_json(r.rates)}};
    out << j.dump() << '\n';
  }
  for (const auto& s : report.summary) {
    Json j{{"type", "summary"},
           {"method", s.method},
           {"total_recommendations", s.recommendations},
           {"true_positives", s.true_positives},
           {"precision", s.micro.precision},
           {"recall", s.micro.recall},
           {"f_measure", s.micro.f_measure},
           {"false_positives", s.false_positives},
           {"false_negatives", s.false_negatives},
           {"deleted_pairs", s.deleted_pairs},
           {"deleted_edges", s.deleted_edges},
           {"reproduced_edges", s.reproduced_edges},
           {"beyond_fof", s.beyond_fof},
           {"macro", rates_json(s.macro)},
           {"recall_edge_base", s.recall_edge_base},
           {"novelty", s.novelty}};
    out << j.dump() << '\n';
  }
}

void write_report(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open report for writing: " + path.string());
  write_report(report, out);
  if (!out) throw std::runtime_error("failed writing report: " + path.string());
}

EvalReport read_report(std::istream& in) {
  EvalReport report;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      const Json j = Json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (type == "meta") {
        for (const auto& [k, v] : j.at("fields").items()) {
          report.metadata.emplace_back(k, v.get<std::string>());
        }
      } else if (type == "run") {
        MethodRun r;
        r.run = j.at("run").get<std::size_t>();
        r.method = j.at("method").get<std::string>();
        r.evaluated_cases = j.at("evaluated_cases").get<std::uint64_t>();
        r.recommendations = j.at("total_recommendations").get<std::uint64_t>();
        r.true_positives = j.at("true_positives").get<std::uint64_t>();
        r.false_positives = j.at("false_positives").get<std::uint64_t>();
        r.false_negatives = j.at("false_negatives").get<std::uint64_t>();
        r.deleted_pairs = j.at("deleted_pairs").get<std::uint64_t>();
        r.deleted_edges = j.at("deleted_edges").get<std::uint64_t>();
        r.reproduced_edges = j.at("reproduced_edges").get<std::uint64_t>();
        r.beyond_fof = j.at("beyond_fof").get<std::uint64_t>();
        r.rates = rates_from(j.at("rates"));
        report.runs.push_back(std::move(r));
      } else if (type == "summary") {
        MethodSummary s;
        s.method = j.at("method").get<std::string>();
        s.recommendations = j.at("total_recommendations").get<std::uint64_t>();
        s.true_positives = j.at("true_positives").get<std::uint64_t>();
        s.micro = rates_from(j);
        s.false_positives = j.at("false_positives").get<std::uint64_t>();
        s.false_negatives = j.at("false_negatives").get<std::uint64_t>();
        s.deleted_pairs = j.at("deleted_pairs").get<std::uint64_t>();
        s.deleted_edges = j.at("deleted_edges").get<std::uint64_t>();
        s.reproduced_edges = j.at("reproduced_edges").get<std::uint64_t>();
        s.beyond_fof = j.at("beyond_fof").get<std::uint64_t>();
        s.macro = rates_from(j.at("macro"));
        s.recall_edge_base = j.at("recall_edge_base").get<double>();
        s.novelty = j.at("novelty").get<double>();
        report.summary.push_back(std::move(s));
      } else {
        throw std::runtime_error("unknown record type '" + type + "'");
      }
    } catch (const std::exception& e) {
      throw std::runtime_error("report line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return report;
}

EvalReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open report: " + path.string());
  return read_report(in);
}

std::string format_summary_table(const EvalReport& report) {
  std::ostringstream out;
  char buf[256];
  std::snprintf(buf, sizeof buf, "%-28s %12s %8s %10s %8s %10s\n", "recommender",
                "total #recs", "TP", "precision", "recall", "f-measure");
  out << buf;
  for (const auto& s : report.summary) {
    std::snprintf(buf, sizeof buf, "%-28s %12llu %8llu %10.3f %8.3f %10.3f\n", s.method.c_str(),
                  static_cast<unsigned long long>(s.recommendations),
                  static_cast<unsigned long long>(s.true_positives), s.micro.precision,
                  s.micro.recall, s.micro.f_measure);
    out << buf;
  }
  return out.str();
}

}  // namespace personrec
