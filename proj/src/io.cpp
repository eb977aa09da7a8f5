#include "dwellcert/io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <atomic>
#include <future>
#include <random>
#include <sstream>
#include <thread>

#include <json.hpp>

namespace dwellcert {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

int thread_count() {
  if (const char* env = std::getenv("DWELLCERT_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

namespace {

[[noreturn]] void parse_fail(const std::string& origin, const std::string& what) {
  fail(errc::parse_error, origin + ": " + what);
}

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> known,
                         const std::string& origin, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok) parse_fail(origin, "unknown key \"" + it.key() + "\" in " + where);
  }
}

double require_number(const json& j, const std::string& origin, const std::string& what) {
  if (!j.is_number()) parse_fail(origin, what + " must be a number");
  return j.get<double>();
}

int require_int(const json& j, const std::string& origin, const std::string& what) {
  if (!j.is_number_integer()) parse_fail(origin, what + " must be an integer");
  return j.get<int>();
}

Matrix parse_matrix(const json& rows, const std::string& origin, size_t index) {
  const std::string what = "matrices[" + std::to_string(index) + "]";
  if (!rows.is_array() || rows.empty()) parse_fail(origin, what + " must be a nonempty array");
  const size_t d = rows.size();
  Matrix m(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(rows[0].size()));
  for (size_t i = 0; i < d; ++i) {
    if (!rows[i].is_array() || rows[i].size() != static_cast<size_t>(m.cols()))
      parse_fail(origin, what + " rows have inconsistent lengths");
    for (size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          require_number(rows[i][j], origin, what + " entry");
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

RunConfig parse_config(const json& cfg, double dwell_time, const std::string& origin) {
  RunConfig rc;
  reject_unknown_keys(cfg,
                      {"steps", "beam", "depth", "enum_length", "max_iterations", "max_vertices",
                       "positive_mode", "format"},
                      origin, "config");
  if (cfg.contains("steps")) {
    if (!cfg["steps"].is_array()) parse_fail(origin, "config.steps must be an array");
    for (const auto& s : cfg["steps"]) {
      const double h = require_number(s, origin, "config.steps entry");
      if (!(h > 0.0) || h > dwell_time)
        fail(errc::validation_error,
             origin + ": step " + fmt17(h) + " is outside (0, dwell_time]");
      rc.steps.push_back(h);
    }
  }
  if (cfg.contains("beam")) rc.beam = require_int(cfg["beam"], origin, "config.beam");
  if (cfg.contains("depth")) rc.depth = require_int(cfg["depth"], origin, "config.depth");
  if (cfg.contains("enum_length"))
    rc.enum_length = require_int(cfg["enum_length"], origin, "config.enum_length");
  if (cfg.contains("max_iterations"))
    rc.max_iterations = require_int(cfg["max_iterations"], origin, "config.max_iterations");
  if (cfg.contains("max_vertices"))
    rc.max_vertices = require_int(cfg["max_vertices"], origin, "config.max_vertices");
  if (cfg.contains("positive_mode")) {
    if (!cfg["positive_mode"].is_boolean()) parse_fail(origin, "config.positive_mode must be a bool");
    rc.positive_mode = cfg["positive_mode"].get<bool>();
  }
  if (cfg.contains("format")) {
    const std::string f = cfg["format"].is_string() ? cfg["format"].get<std::string>() : "";
    if (f == "text") rc.format = OutputFormat::text;
    else if (f == "csv") rc.format = OutputFormat::csv;
    else if (f == "json") rc.format = OutputFormat::json;
    else parse_fail(origin, "config.format must be text|csv|json");
  }
  return rc;
}

ParsedSystem parse_system_document(const json& doc, const std::string& origin) {
  if (!doc.is_object()) parse_fail(origin, "top level must be an object");
  reject_unknown_keys(
      doc, {"schema_version", "matrices", "dwell_time", "labels", "normalize_2norm", "config"},
      origin, "the system document");
  if (!doc.contains("schema_version") || !doc["schema_version"].is_string())
    parse_fail(origin, "missing schema_version");
  if (doc["schema_version"].get<std::string>() != kSchemaVersion)
    parse_fail(origin, "unsupported schema_version \"" +
                           doc["schema_version"].get<std::string>() + "\"");
  if (!doc.contains("matrices") || !doc["matrices"].is_array())
    parse_fail(origin, "missing matrices array");
  if (!doc.contains("dwell_time")) parse_fail(origin, "missing dwell_time");

  std::vector<Matrix> mats;
  for (size_t i = 0; i < doc["matrices"].size(); ++i)
    mats.push_back(parse_matrix(doc["matrices"][i], origin, i));
  const double m = require_number(doc["dwell_time"], origin, "dwell_time");

  std::vector<std::string> labels;
  if (doc.contains("labels")) {
    if (!doc["labels"].is_array()) parse_fail(origin, "labels must be an array of strings");
    for (const auto& l : doc["labels"]) {
      if (!l.is_string()) parse_fail(origin, "labels must be an array of strings");
      labels.push_back(l.get<std::string>());
    }
  }

  if (doc.contains("normalize_2norm")) {
    if (!doc["normalize_2norm"].is_boolean()) parse_fail(origin, "normalize_2norm must be a bool");
    if (doc["normalize_2norm"].get<bool>())
      for (Matrix& a : mats) {
        const double s = operator_2norm(a);
        if (s > 0.0) a /= s;
      }
  }

  ParsedSystem out;
  try {
    out.system = validate_system(std::move(mats), m, std::move(labels), &out.warnings);
  } catch (const error& e) {
    fail(errc::validation_error, origin + ": " + e.what());
  }
  out.config = doc.contains("config") ? parse_config(doc["config"], m, origin) : RunConfig{};
  return out;
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(errc::io_error, "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    fail(errc::parse_error, path + ": " + e.what());
  }
}

}  // namespace

ParsedSystem parse_system_file(const std::string& path) {
  return parse_system_document(load_json_file(path), path);
}

ParsedSystem parse_system_string(const std::string& text, const std::string& origin) {
  try {
    return parse_system_document(json::parse(text), origin);
  } catch (const json::parse_error& e) {
    fail(errc::parse_error, origin + ": " + e.what());
  }
}

StepResult analyze_step(const SwitchingSystem& sys, double h, const RunConfig& cfg) {
  StepResult out;
  out.h = h;
  try {
    const GraphSystem g = build_discretization(sys, h);
    GripenbergResult search = gripenberg_search(g, cfg.beam, cfg.depth);
    Cycle best = search.best;
    try {
      std::vector<Cycle> enumerated = enumerate_cycles(g, cfg.enum_length);
      if (!enumerated.empty()) {
        const Cycle& e = enumerated.front();
        const double tol = 1e-12 * std::max(1.0, best.value);
        if (e.value > best.value + tol ||
            (e.value >= best.value - tol && e.path.total_time < best.path.total_time))
          best = e;
      }
    } catch (const error& e) {
      if (e.code() != errc::budget_exceeded) throw;  // beam result stands
    }

    IpaConfig icfg;
    icfg.max_iterations = cfg.max_iterations;
    icfg.max_vertices_per_mode = cfg.max_vertices;
    icfg.positive_mode = cfg.positive_mode.value_or(is_metzler(sys));
    out.certificate = run_ipa(g, best, icfg);
    out.report = lyapunov_bounds(*out.certificate, sys, h);
  } catch (const error& e) {
    out.error = e.what();
  }
  return out;
}

std::vector<StepResult> run_sweep(const SwitchingSystem& sys, const RunConfig& cfg) {
  std::vector<double> steps = cfg.steps;
  std::sort(steps.begin(), steps.end(), std::greater<>());
  std::vector<StepResult> results(steps.size());

  const int workers = std::min<int>(thread_count(), static_cast<int>(steps.size()));
  if (workers <= 1) {
    for (size_t i = 0; i < steps.size(); ++i) results[i] = analyze_step(sys, steps[i], cfg);
    return results;
  }
  std::vector<std::future<void>> futs;
  std::atomic<size_t> cursor{0};
  for (int w = 0; w < workers; ++w)
    futs.push_back(std::async(std::launch::async, [&] {
      for (size_t i = cursor.fetch_add(1); i < steps.size(); i = cursor.fetch_add(1))
        results[i] = analyze_step(sys, steps[i], cfg);
    }));
  for (auto& f : futs) f.get();
  return results;
}

namespace {

std::string cycle_cell(const StepResult& r) {
  if (!r.ok()) return "error";
  if (!r.report.certified || !r.report.leading_cycle) return "uncertified";
  return r.report.leading_cycle->str();
}

std::string bound_cell(double v) {
  if (std::isinf(v)) return "inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

std::string format_sweep_text(const SwitchingSystem& sys, const std::vector<StepResult>& rows,
                              double elapsed_seconds) {
  std::ostringstream os;
  os << "dwell time m = " << fmt17(sys.dwell_time) << ", " << sys.mode_count() << " modes, d = "
     << sys.dim << "\n";
  os << "      h        lb        ub  leading cycle                 eps  verdict\n";
  for (const StepResult& r : rows) {
    char head[32];
    std::snprintf(head, sizeof head, "%7.3f", r.h);
    os << head;
    if (!r.ok()) {
      os << "  failed: " << r.error << "\n";
      continue;
    }
    char buf[128];
    std::snprintf(buf, sizeof buf, "  %8s  %8s  %-24s  %8.1e  %s",
                  bound_cell(r.report.sigma_lower).c_str(), bound_cell(r.report.sigma_upper).c_str(),
                  cycle_cell(r).c_str(), r.report.epsilon, verdict_name(r.report.verdict));
    os << buf << "\n";
  }
  if (elapsed_seconds >= 0.0) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "# elapsed: %.1f s\n", elapsed_seconds);
    os << buf;
  }
  return os.str();
}

std::string format_sweep_csv(const std::vector<StepResult>& rows) {
  std::string out = "h,lb,ub,leading_cycle,epsilon,verdict\n";
  for (const StepResult& r : rows) {
    out += fmt17(r.h);
    if (!r.ok()) {
      out += ",error,error,error,error,error\n";
      continue;
    }
    out += "," + fmt17(r.report.sigma_lower) + "," + fmt17(r.report.sigma_upper) + "," +
           cycle_cell(r) + "," + fmt17(r.report.epsilon) + "," + verdict_name(r.report.verdict) +
           "\n";
  }
  return out;
}

std::string format_sweep_json(const SwitchingSystem& sys, const std::vector<StepResult>& rows) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["dwell_time"] = sys.dwell_time;
  doc["rows"] = json::array();
  for (const StepResult& r : rows) {
    json row;
    row["h"] = r.h;
    if (!r.ok()) {
      row["error"] = r.error;
    } else {
      row["lb"] = r.report.sigma_lower;
      row["ub"] = std::isinf(r.report.sigma_upper) ? json() : json(r.report.sigma_upper);
      row["rho_hat"] = r.report.rho_hat;
      row["curvature"] = r.report.curvature;
      row["epsilon"] = r.report.epsilon;
      row["certified"] = r.report.certified;
      row["leading_cycle"] = cycle_cell(r);
      row["verdict"] = verdict_name(r.report.verdict);
    }
    doc["rows"].push_back(std::move(row));
  }
  return doc.dump(2) + "\n";
}

namespace {

// endpoint pair of edge id under the fixed discretization edge order:
// loops first by mode, then cross edges by (to, from)
std::pair<int, int> edge_endpoints(int n, int id) {
  if (id < n) return {id, id};
  const int k = id - n;
  const int to = k / (n - 1);
  const int r = k % (n - 1);
  const int from = r < to ? r : r + 1;
  return {from, to};
}

json system_to_json(const SwitchingSystem& sys) {
  json s;
  s["matrices"] = json::array();
  for (const Matrix& a : sys.matrices) s["matrices"].push_back(matrix_to_json(a));
  s["dwell_time"] = sys.dwell_time;
  s["labels"] = sys.labels;
  return s;
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(errc::io_error, "cannot write " + tmp);
    out << content;
    out.flush();
    if (!out) fail(errc::io_error, "short write to " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) fail(errc::io_error, "cannot move " + tmp + " to " + path + ": " + ec.message());
}

}  // namespace

std::string system_to_json_string(const SwitchingSystem& sys, const RunConfig* cfg) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["matrices"] = json::array();
  for (const Matrix& a : sys.matrices) doc["matrices"].push_back(matrix_to_json(a));
  doc["dwell_time"] = sys.dwell_time;
  doc["labels"] = sys.labels;
  if (cfg) {
    json c;
    if (!cfg->steps.empty()) c["steps"] = cfg->steps;
    if (!c.is_null()) doc["config"] = std::move(c);
  }
  return doc.dump(2) + "\n";
}

void emit_certificate(const MultinormCertificate& cert, const SwitchingSystem& sys, double h,
                      const std::string& path) {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["kind"] = "dwellcert-certificate";
  doc["tool_version"] = kToolVersion;
  doc["system"] = system_to_json(sys);
  doc["h"] = h;
  doc["rho_hat"] = cert.rho_hat;
  doc["epsilon"] = cert.epsilon;
  doc["status"] = cert.status == CertStatus::certified ? "certified" : "approximate";
  doc["iterations_used"] = cert.iterations_used;

  json cyc;
  cyc["value"] = cert.leading_cycle.value;
  cyc["total_time"] = cert.leading_cycle.path.total_time;
  cyc["edges"] = json::array();
  for (int id : cert.leading_cycle.path.edge_sequence) {
    const auto [from, to] = edge_endpoints(sys.mode_count(), id);
    cyc["edges"].push_back(json::array({from, to}));
  }
  doc["cycle"] = std::move(cyc);

  json mn;
  mn["variant"] =
      cert.multinorm.components.empty() ||
              cert.multinorm.components.front().variant() == Variant::symmetric
          ? "symmetric"
          : "positive";
  mn["components"] = json::array();
  for (const PolytopeNorm& p : cert.multinorm.components) {
    json verts = json::array();
    for (const Vector& v : p.vertices()) {
      json vv = json::array();
      for (Eigen::Index i = 0; i < v.size(); ++i) vv.push_back(v[i]);
      verts.push_back(std::move(vv));
    }
    mn["components"].push_back(std::move(verts));
  }
  doc["multinorm"] = std::move(mn);

  write_file_atomic(path, doc.dump(2) + "\n");
}

namespace {

MultinormCertificate parse_certificate(const json& doc, const std::string& origin,
                                       SwitchingSystem* sys_out, double* h_out) {
  if (!doc.is_object()) parse_fail(origin, "top level must be an object");
  reject_unknown_keys(doc,
                      {"schema_version", "kind", "tool_version", "system", "h", "rho_hat",
                       "epsilon", "status", "iterations_used", "cycle", "multinorm"},
                      origin, "the certificate");
  for (const char* k : {"schema_version", "kind", "system", "h", "rho_hat", "epsilon", "status",
                        "cycle", "multinorm"})
    if (!doc.contains(k)) parse_fail(origin, std::string("missing key \"") + k + "\"");
  if (doc["kind"].get<std::string>() != "dwellcert-certificate")
    parse_fail(origin, "not a certificate file");

  const json& sj = doc["system"];
  reject_unknown_keys(sj, {"matrices", "dwell_time", "labels"}, origin, "certificate system");
  std::vector<Matrix> mats;
  for (size_t i = 0; i < sj["matrices"].size(); ++i)
    mats.push_back(parse_matrix(sj["matrices"][i], origin, i));
  std::vector<std::string> labels;
  if (sj.contains("labels"))
    for (const auto& l : sj["labels"]) labels.push_back(l.get<std::string>());
  *sys_out = validate_system(std::move(mats), require_number(sj["dwell_time"], origin, "dwell_time"),
                             std::move(labels));
  *h_out = require_number(doc["h"], origin, "h");

  const GraphSystem g = build_discretization(*sys_out, *h_out);

  MultinormCertificate cert;
  cert.rho_hat = require_number(doc["rho_hat"], origin, "rho_hat");
  cert.epsilon = require_number(doc["epsilon"], origin, "epsilon");
  const std::string status = doc["status"].get<std::string>();
  if (status != "certified" && status != "approximate") parse_fail(origin, "bad status");
  cert.status = status == "certified" ? CertStatus::certified : CertStatus::approximate;
  cert.cycle_possibly_not_leading = cert.status != CertStatus::certified;
  if (doc.contains("iterations_used"))
    cert.iterations_used = require_int(doc["iterations_used"], origin, "iterations_used");

  const json& cj = doc["cycle"];
  reject_unknown_keys(cj, {"value", "total_time", "edges"}, origin, "certificate cycle");
  std::vector<int> edge_ids;
  for (const auto& e : cj["edges"]) {
    if (!e.is_array() || e.size() != 2) parse_fail(origin, "cycle edges must be [from,to] pairs");
    const int id = g.find_edge(e[0].get<int>(), e[1].get<int>());
    if (id < 0) parse_fail(origin, "cycle edge does not exist in the discretization");
    edge_ids.push_back(id);
  }
  cert.leading_cycle = make_cycle(g, edge_ids);

  const json& mj = doc["multinorm"];
  reject_unknown_keys(mj, {"variant", "components"}, origin, "certificate multinorm");
  const std::string var = mj["variant"].get<std::string>();
  if (var != "symmetric" && var != "positive") parse_fail(origin, "bad multinorm variant");
  const Variant variant = var == "symmetric" ? Variant::symmetric : Variant::positive;
  for (const auto& comp : mj["components"]) {
    std::vector<Vector> verts;
    for (const auto& vv : comp) {
      Vector v(static_cast<Eigen::Index>(vv.size()));
      for (size_t i = 0; i < vv.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = require_number(vv[i], origin, "vertex entry");
      verts.push_back(std::move(v));
    }
    cert.multinorm.components.emplace_back(sys_out->dim, variant, std::move(verts));
  }
  return cert;
}

}  // namespace

MultinormCertificate load_certificate_file(const std::string& path, SwitchingSystem* sys,
                                           double* h) {
  return parse_certificate(load_json_file(path), path, sys, h);
}

LoadVerifyResult load_and_verify(const std::string& cert_path, const std::string& system_path) {
  SwitchingSystem cert_sys;
  double h = 0.0;
  MultinormCertificate cert = parse_certificate(load_json_file(cert_path), cert_path, &cert_sys, &h);
  const ParsedSystem given = parse_system_file(system_path);

  // serialized numbers round-trip exactly, so a matching file matches bitwise
  if (given.system.mode_count() != cert_sys.mode_count() || given.system.dim != cert_sys.dim ||
      given.system.dwell_time != cert_sys.dwell_time)
    fail(errc::certificate_mismatch, "certificate was issued for a different system");
  for (int j = 0; j < cert_sys.mode_count(); ++j)
    if (given.system.matrices[static_cast<size_t>(j)] != cert_sys.matrices[static_cast<size_t>(j)])
      fail(errc::certificate_mismatch,
           "certificate was issued for a different regime " + std::to_string(j + 1));

  const GraphSystem g = build_discretization(given.system, h);
  const VerifyReport rep = verify_certificate(g, cert);
  LoadVerifyResult out;
  out.ok = rep.ok;
  out.message = rep.ok ? "certificate verified: rho_hat = " + fmt17(cert.rho_hat) +
                             ", epsilon = " + fmt17(cert.epsilon)
                       : "verification failed: " + rep.first_violation;
  return out;
}

namespace {

// counterclockwise convex hull (monotone chain); collinear points dropped
std::vector<Eigen::Vector2d> hull_2d(std::vector<Eigen::Vector2d> pts) {
  std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
    return a.x() != b.x() ? a.x() < b.x() : a.y() < b.y();
  });
  pts.erase(std::unique(pts.begin(), pts.end(),
                        [](const auto& a, const auto& b) { return a == b; }),
            pts.end());
  if (pts.size() < 3) return pts;
  auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
    return (a.x() - o.x()) * (b.y() - o.y()) - (a.y() - o.y()) * (b.x() - o.x());
  };
  std::vector<Eigen::Vector2d> out(2 * pts.size());
  size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(out[k - 2], out[k - 1], p) <= 0) --k;
    out[k++] = p;
  }
  const size_t lower = k + 1;
  for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) {
    while (k >= lower && cross(out[k - 2], out[k - 1], *it) <= 0) --k;
    out[k++] = *it;
  }
  out.resize(k - 1);
  return out;
}

std::vector<Eigen::Vector2d> ball_polygon(const PolytopeNorm& p) {
  std::vector<Eigen::Vector2d> pts;
  for (const Vector& v : p.vertices()) {
    pts.emplace_back(v[0], v[1]);
    if (p.variant() == Variant::symmetric) {
      pts.emplace_back(-v[0], -v[1]);
    } else {
      pts.emplace_back(v[0], 0.0);  // co_+ adds the axis projections and the origin
      pts.emplace_back(0.0, v[1]);
    }
  }
  if (p.variant() == Variant::positive) pts.emplace_back(0.0, 0.0);
  return hull_2d(std::move(pts));
}

std::string svg_polygon(const std::vector<Eigen::Vector2d>& poly, double scale,
                        const std::string& style) {
  std::string s = "  <polygon points=\"";
  for (size_t i = 0; i < poly.size(); ++i) {
    if (i) s += " ";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", poly[i].x() * scale, -poly[i].y() * scale);
    s += buf;
  }
  s += "\" " + style + "/>\n";
  return s;
}

}  // namespace

void export_polytopes_2d(const MultinormCertificate& cert, const SwitchingSystem& sys, double h,
                         const std::string& svg_path) {
  if (sys.dim != 2) fail(errc::dimension_not_two, "polytope export needs a 2-D system");
  if (cert.multinorm.size() != sys.mode_count())
    fail(errc::certificate_mismatch, "certificate does not match the system");

  const GraphSystem g = build_discretization(sys, h);
  const GraphSystem gs = shift_graph(g, std::log(cert.rho_hat));

  std::vector<std::vector<Eigen::Vector2d>> mode_polys;
  for (const PolytopeNorm& p : cert.multinorm.components) mode_polys.push_back(ball_polygon(p));

  struct ImagePoly {
    int from, to;
    std::vector<Eigen::Vector2d> poly;
  };
  std::vector<ImagePoly> images;
  for (const GraphEdge& e : gs.edges) {
    std::vector<Eigen::Vector2d> pts;
    for (const auto& q : mode_polys[static_cast<size_t>(e.from)]) {
      const Eigen::Vector2d img = e.op * q;
      pts.push_back(img);
    }
    images.push_back({e.from, e.to, hull_2d(std::move(pts))});
  }

  double extent = 1e-9;
  for (const auto& poly : mode_polys)
    for (const auto& q : poly) extent = std::max({extent, std::abs(q.x()), std::abs(q.y())});
  const double scale = 220.0 / extent;
  const double view = 240.0;

  static const char* kModeStyle[] = {
      "fill=\"none\" stroke=\"#1f4fb8\" stroke-width=\"2.5\" stroke-dasharray=\"8 4\"",
      "fill=\"none\" stroke=\"#c0392b\" stroke-width=\"2.5\" stroke-dasharray=\"8 3 2 3\"",
      "fill=\"none\" stroke=\"#1e8449\" stroke-width=\"2.5\" stroke-dasharray=\"2 3\"",
      "fill=\"none\" stroke=\"#7d3c98\" stroke-width=\"2.5\"",
  };
  static const char* kImageStyle[] = {
      "fill=\"none\" stroke=\"#1f4fb8\" stroke-width=\"0.8\"",
      "fill=\"none\" stroke=\"#c0392b\" stroke-width=\"0.8\" stroke-dasharray=\"3 2\"",
      "fill=\"none\" stroke=\"#1e8449\" stroke-width=\"0.8\"",
      "fill=\"none\" stroke=\"#7d3c98\" stroke-width=\"0.8\" stroke-dasharray=\"3 2\"",
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" << -view << " " << -view << " "
      << 2 * view << " " << 2 * view << "\">\n";
  svg << "  <line x1=\"" << -view << "\" y1=\"0\" x2=\"" << view
      << "\" y2=\"0\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
  svg << "  <line x1=\"0\" y1=\"" << -view << "\" x2=\"0\" y2=\"" << view
      << "\" stroke=\"#cccccc\" stroke-width=\"0.5\"/>\n";
  svg << "  <g id=\"images\">\n";
  for (const auto& ip : images)
    svg << svg_polygon(ip.poly, scale, kImageStyle[static_cast<size_t>(ip.to) % 4]);
  svg << "  </g>\n  <g id=\"polytopes\">\n";
  for (size_t j = 0; j < mode_polys.size(); ++j)
    svg << svg_polygon(mode_polys[j], scale, kModeStyle[j % 4]);
  svg << "  </g>\n</svg>\n";
  write_file_atomic(svg_path, svg.str());

  json side;
  side["schema_version"] = kSchemaVersion;
  side["h"] = h;
  side["rho_hat"] = cert.rho_hat;
  side["modes"] = json::array();
  for (size_t j = 0; j < mode_polys.size(); ++j) {
    json mj;
    mj["label"] = sys.labels[j];
    mj["polygon"] = json::array();
    for (const auto& q : mode_polys[j]) mj["polygon"].push_back(json::array({q.x(), q.y()}));
    side["modes"].push_back(std::move(mj));
  }
  side["images"] = json::array();
  for (const auto& ip : images) {
    json ij;
    ij["edge"] = json::array({ip.from, ip.to});
    ij["polygon"] = json::array();
    for (const auto& q : ip.poly) ij["polygon"].push_back(json::array({q.x(), q.y()}));
    side["images"].push_back(std::move(ij));
  }
  write_file_atomic(svg_path + ".json", side.dump(2) + "\n");
}

namespace {

// Deterministic across platforms: uniforms straight off the engine words,
// normals by Box-Muller.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double normal01(std::mt19937_64& rng) {
  double u1 = 0.0;
  do {
    u1 = uniform01(rng);
  } while (u1 <= 0.0);
  const double u2 = uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * 3.14159265358979323846 * u2);
}

}  // namespace

SwitchingSystem generate_random_system(RandomFamily family, int dim, int modes, double dwell_time,
                                       std::uint64_t seed, bool normalize) {
  if (dim < 1 || modes < 1) fail(errc::validation_error, "need dim >= 1 and modes >= 1");
  std::mt19937_64 rng(seed);
  std::vector<Matrix> mats;
  for (int k = 0; k < modes; ++k) {
    Matrix a(dim, dim);
    if (family == RandomFamily::gaussian) {
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) a(i, j) = normal01(rng);
    } else {
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) {
          if (i == j)
            a(i, j) = static_cast<double>(static_cast<int>(rng() % 19)) - 9.0;  // [-9, 9]
          else
            a(i, j) = static_cast<double>(static_cast<int>(rng() % 10));  // [0, 9]
        }
    }
    if (normalize) {
      const double s = operator_2norm(a);
      if (s > 0.0) a /= s;
    }
    mats.push_back(std::move(a));
  }
  return validate_system(std::move(mats), dwell_time);
}

}  // namespace dwellcert
