#include <cmath>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "lovo/bench.hpp"
#include "lovo/errors.hpp"

namespace lovo {
namespace {

using nlohmann::json;

std::string num(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string fixed(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

double parse_double(const std::string& s) {
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw IoError("malformed number '" + s + "'");
  }
  if (used != s.size()) throw IoError("malformed number '" + s + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(line);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

std::string file_stem(const std::string& name) {
  std::string s = name.empty() ? "problem" : name;
  for (char& c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) c = '_';
  return s;
}

json finite_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

EmitFormat parse_emit_format(std::string_view text) {
  if (text == "csv") return EmitFormat::kCsv;
  if (text == "json") return EmitFormat::kJson;
  if (text == "svg") return EmitFormat::kSvg;
  throw ConfigError("format must be csv, json or svg");
}

std::string profiles_to_csv(const std::vector<DataProfile>& profiles) {
  std::string out = "tau,kappa,solved_fraction\n";
  for (const auto& p : profiles)
    for (const auto& s : p.steps) out += num(p.tau) + "," + num(s.kappa) + "," + num(s.fraction) + "\n";
  return out;
}

std::vector<DataProfile> profiles_from_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "tau,kappa,solved_fraction")
    throw IoError("profile CSV: expected header tau,kappa,solved_fraction");
  std::vector<DataProfile> out;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 3) throw IoError("profile CSV: expected 3 columns in '" + line + "'");
    const double tau = parse_double(f[0]);
    if (out.empty() || out.back().tau != tau) {
      out.emplace_back();
      out.back().tau = tau;
    }
    out.back().steps.push_back({parse_double(f[1]), parse_double(f[2])});
  }
  return out;
}

std::string profiles_to_json(const std::vector<DataProfile>& profiles) {
  json arr = json::array();
  for (const auto& p : profiles) {
    json steps = json::array(), solves = json::array();
    for (const auto& s : p.steps) steps.push_back({{"kappa", s.kappa}, {"fraction", s.fraction}});
    for (const auto& s : p.solves)
      solves.push_back({{"problem", s.problem}, {"kappa", s.kappa ? json(*s.kappa) : json(nullptr)}});
    arr.push_back({{"tag", p.tag},
                   {"tau", p.tau},
                   {"num_problems", p.num_problems},
                   {"steps", steps},
                   {"solves", solves}});
  }
  return arr.dump(2) + "\n";
}

std::string profiles_to_svg(const std::vector<DataProfile>& profiles) {
  const double W = 640, H = 420, left = 60, right = 160, top = 20, bottom = 50;
  const double pw = W - left - right, ph = H - top - bottom;
  double kmax = 1.0;
  for (const auto& p : profiles)
    for (const auto& s : p.steps)
      if (std::isfinite(s.kappa)) kmax = std::max(kmax, s.kappa);
  kmax *= 1.05;
  auto X = [&](double k) { return fixed(left + pw * std::min(k, kmax) / kmax); };
  auto Y = [&](double f) { return fixed(top + ph * (1.0 - f)); };

  std::string out;
  out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fixed(W) + "\" height=\"" +
         fixed(H) + "\" viewBox=\"0 0 " + fixed(W) + " " + fixed(H) + "\">\n";
  out += "<rect x=\"0\" y=\"0\" width=\"" + fixed(W) + "\" height=\"" + fixed(H) +
         "\" fill=\"white\"/>\n";
  out += "<line x1=\"" + X(0) + "\" y1=\"" + Y(0) + "\" x2=\"" + X(kmax) + "\" y2=\"" + Y(0) +
         "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + X(0) + "\" y1=\"" + Y(0) + "\" x2=\"" + X(0) + "\" y2=\"" + Y(1) +
         "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double f = t / 4.0, k = kmax / 1.05 * t / 4.0;
    out += "<text x=\"" + fixed(left - 8) + "\" y=\"" + Y(f) +
           "\" font-size=\"11\" text-anchor=\"end\">" + fixed(f) + "</text>\n";
    out += "<text x=\"" + X(k) + "\" y=\"" + fixed(top + ph + 16) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + fixed(k) + "</text>\n";
  }
  out += "<text x=\"" + fixed(left + pw / 2) + "\" y=\"" + fixed(H - 10) +
         "\" font-size=\"13\" text-anchor=\"middle\">simplex gradients</text>\n";
  out += "<text x=\"15\" y=\"" + fixed(top + ph / 2) +
         "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 15 " +
         fixed(top + ph / 2) + ")\">fraction solved</text>\n";

  for (std::size_t k = 0; k < profiles.size(); ++k) {
    const auto& p = profiles[k];
    const char* color = kPalette[k % (sizeof kPalette / sizeof kPalette[0])];
    std::string pts = X(0) + "," + Y(0);
    double prev = 0.0;
    for (const auto& s : p.steps) {
      pts += " " + X(s.kappa) + "," + Y(prev) + " " + X(s.kappa) + "," + Y(s.fraction);
      prev = s.fraction;
    }
    pts += " " + X(kmax) + "," + Y(prev);
    out += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
           "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
    std::string label = p.tag.empty() ? "" : p.tag + " ";
    label += "tau=" + num(p.tau);
    out += "<text x=\"" + fixed(left + pw + 10) + "\" y=\"" + fixed(top + 14 + 16.0 * k) +
           "\" font-size=\"11\" fill=\"" + color + "\">" + label + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

std::string table_to_csv(
    const std::vector<std::pair<double, std::vector<SimplexGradientRow>>>& rows) {
  std::string out = "tau,fraction,simplex_gradients\n";
  for (const auto& [tau, table] : rows)
    for (const auto& row : table) out += num(tau) + "," + num(row.fraction) + "," + num(row.kappa) + "\n";
  return out;
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const std::vector<DataProfile>& profiles, EmitFormat format,
          const std::filesystem::path& path) {
  switch (format) {
    case EmitFormat::kCsv: write_text_file(path, profiles_to_csv(profiles)); break;
    case EmitFormat::kJson: write_text_file(path, profiles_to_json(profiles)); break;
    case EmitFormat::kSvg: write_text_file(path, profiles_to_svg(profiles)); break;
  }
}

void emit_table(const std::vector<std::pair<double, std::vector<SimplexGradientRow>>>& rows,
                const std::filesystem::path& path) {
  write_text_file(path, table_to_csv(rows));
}

std::string trace_to_csv(const std::vector<TracePoint>& samples) {
  std::string out = "t,f_best\n";
  for (const auto& s : samples) out += std::to_string(s.t) + "," + num(s.f_best) + "\n";
  return out;
}

namespace {

std::vector<TracePoint> trace_from_csv(const std::string& text, const std::string& what) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != "t,f_best")
    throw IoError(what + ": expected header t,f_best");
  std::vector<TracePoint> out;
  while (std::getline(in, line)) {
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 2) throw IoError(what + ": expected 2 columns");
    out.push_back({static_cast<long long>(parse_double(f[0])), parse_double(f[1])});
  }
  return out;
}

}  // namespace

void write_traces(const std::vector<RunTrace>& traces, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
  json manifest = json::array();
  for (const auto& t : traces) {
    const std::string stem = file_stem(t.problem_name);
    write_text_file(dir / (stem + ".csv"), trace_to_csv(t.samples));
    write_text_file(dir / (stem + ".provisional.csv"), trace_to_csv(t.provisional));
    json x = json::array();
    for (Eigen::Index j = 0; j < t.x_final.size(); ++j) x.push_back(t.x_final[j]);
    json entry = {{"problem", t.problem_name},
                  {"n", t.n_p},
                  {"r", t.r_p},
                  {"budget", t.budget},
                  {"status", t.status},
                  {"metering", t.metering == Metering::kComponent ? "component" : "fmin"},
                  {"f0", finite_or_null(t.f0)},
                  {"evals", t.evals_used},
                  {"feasibility_violations", t.feasibility_violations},
                  {"trace", stem + ".csv"},
                  {"provisional", stem + ".provisional.csv"},
                  {"final_index", t.final_index},
                  {"f_final", finite_or_null(t.f_final)},
                  {"f_final_certified", t.f_final_certified},
                  {"x_final", x}};
    if (!t.error.empty()) entry["error"] = t.error;
    manifest.push_back(entry);
  }
  write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

std::vector<RunTrace> read_traces(const std::filesystem::path& dir) {
  json manifest;
  try {
    manifest = json::parse(read_text_file(dir / "manifest.json"));
  } catch (const json::parse_error& e) {
    throw IoError(dir.string() + "/manifest.json: " + e.what());
  }
  std::vector<RunTrace> out;
  try {
    for (const auto& e : manifest) {
      RunTrace t;
      t.problem_name = e.at("problem").get<std::string>();
      t.n_p = e.at("n").get<int>();
      t.r_p = e.at("r").get<int>();
      t.budget = e.at("budget").get<long long>();
      t.status = e.at("status").get<std::string>();
      t.metering = e.value("metering", std::string("component")) == "fmin" ? Metering::kFmin
                                                                          : Metering::kComponent;
      t.f0 = e.at("f0").is_null() ? std::numeric_limits<double>::quiet_NaN()
                                  : e.at("f0").get<double>();
      t.evals_used = e.value("evals", 0LL);
      t.feasibility_violations = e.value("feasibility_violations", 0LL);
      t.error = e.value("error", std::string());
      t.final_index = e.value("final_index", 0);
      if (e.contains("f_final") && !e["f_final"].is_null()) t.f_final = e["f_final"].get<double>();
      t.f_final_certified = e.value("f_final_certified", false);
      if (e.contains("x_final") && e["x_final"].is_array()) {
        const auto x = e["x_final"].get<std::vector<double>>();
        t.x_final = Eigen::Map<const Vector>(x.data(), static_cast<Eigen::Index>(x.size()));
      }
      const std::string file = e.at("trace").get<std::string>();
      t.samples = trace_from_csv(read_text_file(dir / file), file);
      if (e.contains("provisional")) {
        const std::string pfile = e.at("provisional").get<std::string>();
        t.provisional = trace_from_csv(read_text_file(dir / pfile), pfile);
      }
      out.push_back(std::move(t));
    }
  } catch (const json::exception& e) {
    throw IoError(dir.string() + "/manifest.json: " + e.what());
  }
  return out;
}

}  // namespace lovo
