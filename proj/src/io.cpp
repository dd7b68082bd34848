#include "mobw/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "mobw/mobw_dist.hpp"

namespace mobw {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[40];
  // Shortest representation that parses back to the same bits.
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) return buf;
  }
  return buf;
}

namespace {

double parse_double(const std::string& tok) {
  if (tok == "inf" || tok == "Infinity") {
    return std::numeric_limits<double>::infinity();
  }
  if (tok == "-inf") return -std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  const double v = std::stod(tok, &pos);
  if (pos != tok.size()) throw std::invalid_argument("bad number '" + tok + "'");
  return v;
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<CompetingRisksObs> to_competing_risks(const BivariateDataset& d) {
  std::vector<CompetingRisksObs> out;
  out.reserve(d.pairs.size());
  for (const auto& [y1, y2] : d.pairs) {
    if (!(y1 > 0.0) || !(y2 > 0.0)) {
      throw std::invalid_argument("to_competing_risks: entries must be > 0");
    }
    CompetingRisksObs o;
    if (y1 == y2) {
      o = {y1, 0};
    } else if (y1 < y2) {
      o = {y1, 1};
    } else {
      o = {y2, 2};
    }
    out.push_back(o);
  }
  return out;
}

void write_censored_csv(const CensoredSample& s, std::ostream& os) {
  os << "# {\"n\":" << s.n << ",\"m\":" << s.m() << ",\"T\":" << format_double(s.T)
     << ",\"J\":" << s.J << ",\"Rstar\":" << s.rstar << ",\"seed\":" << s.seed
     << "}\n";
  os << "y,delta,removal\n";
  for (int i = 0; i < s.m(); ++i) {
    os << format_double(s.times[i]) << ',' << s.causes[i] << ','
       << s.applied_removals[i] << '\n';
  }
}

void write_censored_csv(const CensoredSample& s, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  write_censored_csv(s, f);
}

CensoredSample read_censored_csv(std::istream& is) {
  std::string line;
  int n = -1, J = -1, rstar = -1;
  double T = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
  bool have_header_record = false;

  std::vector<double> times;
  std::vector<int> causes, removals;

  auto parse_header_record = [&](const std::string& body) {
    // Minimal parser for the one-line {"k":v,...} record; values may include
    // "inf" which strict JSON parsers refuse.
    std::string inner = body;
    const auto l = inner.find('{');
    const auto r = inner.rfind('}');
    if (l == std::string::npos || r == std::string::npos || r <= l) return;
    inner = inner.substr(l + 1, r - l - 1);
    for (const std::string& kv : split(inner, ',')) {
      const auto c = kv.find(':');
      if (c == std::string::npos) continue;
      std::string key = trim(kv.substr(0, c));
      std::string val = trim(kv.substr(c + 1));
      if (!key.empty() && key.front() == '"') key = key.substr(1, key.size() - 2);
      if (key == "n") n = std::stoi(val);
      else if (key == "T") T = parse_double(val);
      else if (key == "J") J = std::stoi(val);
      else if (key == "Rstar") rstar = std::stoi(val);
      else if (key == "seed") seed = std::stoull(val);
    }
    have_header_record = true;
  };

  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (!have_header_record && line.find('{') != std::string::npos) {
        parse_header_record(line);
      }
      continue;
    }
    if (line.rfind("y,", 0) == 0 || line.rfind("y ", 0) == 0) continue;  // column header
    const std::vector<std::string> f = split(line, ',');
    if (f.size() < 2) throw std::runtime_error("censored csv: bad row '" + line + "'");
    times.push_back(parse_double(trim(f[0])));
    causes.push_back(std::stoi(trim(f[1])));
    removals.push_back(f.size() >= 3 ? std::stoi(trim(f[2])) : 0);
  }
  if (times.empty()) throw std::runtime_error("censored csv: no data rows");
  if (n < 0) {
    // No header record: complete-sample convention.
    int removed = 0;
    for (int r : removals) removed += r;
    n = static_cast<int>(times.size()) + removed;
  }
  CensoredSample s = make_censored_sample(n, T, std::move(times),
                                          std::move(causes), std::move(removals));
  s.seed = seed;
  if (s.had_tied_times) {
    std::fprintf(stderr,
                 "warning: tied failure times in input, kept in stable order\n");
  }
  // J and rstar are recomputed from T and the removal column; a mismatch in
  // the header record means an inconsistent file.
  if (have_header_record && J >= 0 && J != s.J) {
    throw std::runtime_error("censored csv: header J inconsistent with data");
  }
  if (have_header_record && rstar >= 0 && rstar != s.rstar) {
    throw std::runtime_error("censored csv: header Rstar inconsistent with data");
  }
  return s;
}

CensoredSample read_censored_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  return read_censored_csv(f);
}

void write_bivariate_csv(const BivariateDataset& d, std::ostream& os) {
  os << "# normalizer=" << format_double(d.normalizer) << "\n";
  os << "y1,y2\n";
  for (const auto& [y1, y2] : d.pairs) {
    os << format_double(y1) << ',' << format_double(y2) << '\n';
  }
}

BivariateDataset read_bivariate_csv(std::istream& is) {
  BivariateDataset d;
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      const auto eq = line.find("normalizer=");
      if (eq != std::string::npos) {
        d.normalizer = parse_double(trim(line.substr(eq + 11)));
      }
      continue;
    }
    if (line.rfind("y1", 0) == 0) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 2) throw std::runtime_error("bivariate csv: bad row '" + line + "'");
    d.pairs.emplace_back(parse_double(trim(f[0])), parse_double(trim(f[1])));
  }
  if (d.pairs.empty()) throw std::runtime_error("bivariate csv: no data rows");
  return d;
}

BivariateDataset read_bivariate_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open: " + path);
  return read_bivariate_csv(f);
}

std::string fit_result_to_json(const FitResult& r) {
  nlohmann::json j;
  j["estimates"] = {{"lambda0", r.estimates.lambda0},
                    {"lambda1", r.estimates.lambda1},
                    {"lambda2", r.estimates.lambda2},
                    {"alpha", r.estimates.alpha}};
  j["gamma"] = r.gamma;
  j["fisher"] = r.fisher.a;
  std::vector<nlohmann::json> cov;
  for (double v : r.covariance.a) {
    cov.push_back(std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v));
  }
  j["covariance"] = cov;
  const char* names[4] = {"lambda0", "lambda1", "lambda2", "alpha"};
  for (int i = 0; i < 4; ++i) {
    if (r.acis[i].valid) {
      j["intervals"][names[i]] = {r.acis[i].lower, r.acis[i].upper};
    } else {
      j["intervals"][names[i]] = nullptr;
    }
  }
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["boundary"] = r.boundary;
  j["fisher_condition"] = r.fisher_condition;
  return j.dump(2);
}

void write_draws_csv(const PosteriorDraws& draws, std::ostream& os) {
  os << "iter,alpha,lambda0,lambda1,lambda2\n";
  for (std::size_t i = 0; i < draws.draws.size(); ++i) {
    const auto& d = draws.draws[i];
    os << i << ',' << format_double(d[0]) << ',' << format_double(d[1]) << ','
       << format_double(d[2]) << ',' << format_double(d[3]) << '\n';
  }
}

void write_joint_pdf_grid(const MobwParams& p, double y_max, int points,
                          std::ostream& os) {
  if (points < 2 || !(y_max > 0.0)) {
    throw std::invalid_argument("write_joint_pdf_grid: bad grid spec");
  }
  os << "y1,y2,density,part\n";
  for (int i = 1; i <= points; ++i) {
    const double y1 = y_max * i / points;
    for (int j = 1; j <= points; ++j) {
      const double y2 = y_max * j / points;
      const char* part = i == j ? "diagonal" : (i < j ? "lower" : "upper");
      os << format_double(y1) << ',' << format_double(y2) << ','
         << format_double(mobw_joint_pdf(y1, y2, p)) << ',' << part << '\n';
    }
  }
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(f, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("config: expected key = value, got '" + line + "'");
    }
    kv[trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
  }
  return kv;
}

}  // namespace mobw
