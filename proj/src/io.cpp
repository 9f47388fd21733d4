#include "gammarobust/io.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <random>
#include <sstream>

namespace gammarobust::io {

namespace {

struct Token {
  std::string text;
  std::size_t line = 0;
  std::size_t column = 0;
};

std::vector<Token> tokenize(std::string_view text) {
  std::vector<Token> tokens;
  std::size_t line = 1, column = 0;
  Token current;
  for (char ch : text) {
    if (ch == '\n') {
      if (!current.text.empty()) tokens.push_back(current), current.text.clear();
      ++line;
      column = 0;
      continue;
    }
    ++column;
    if (std::isspace(static_cast<unsigned char>(ch))) {
      if (!current.text.empty()) tokens.push_back(current), current.text.clear();
      continue;
    }
    if (current.text.empty()) {
      current.line = line;
      current.column = column;
    }
    current.text.push_back(ch);
  }
  if (!current.text.empty()) tokens.push_back(current);
  return tokens;
}

double token_to_double(const Token& t) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(t.text, &used);
  } catch (const std::exception&) {
    throw ParseError("expected a number, found '" + t.text + "'", t.line, t.column);
  }
  if (used != t.text.size())
    throw ParseError("expected a number, found '" + t.text + "'", t.line, t.column);
  return v;
}

long token_to_long(const Token& t) {
  const double v = token_to_double(t);
  if (v != std::floor(v))
    throw ParseError("expected an integer, found '" + t.text + "'", t.line, t.column);
  return static_cast<long>(v);
}

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

}  // namespace

QaplibInstance parse_qaplib(std::string_view text) {
  const std::vector<Token> tokens = tokenize(text);
  if (tokens.empty()) throw ParseError("empty QAPLIB file", 1, 1);
  const long n_raw = token_to_long(tokens[0]);
  if (n_raw <= 0)
    throw ParseError("instance size must be positive, got " + tokens[0].text,
                     tokens[0].line, tokens[0].column);
  const std::size_t n = static_cast<std::size_t>(n_raw);
  const std::size_t expected = 1 + 2 * n * n;
  if (tokens.size() != expected) {
    const Token& at = tokens.size() > 1 ? tokens.back() : tokens[0];
    throw ParseError("expected " + std::to_string(expected) + " tokens for n = " +
                         std::to_string(n) + ", found " +
                         std::to_string(tokens.size()),
                     at.line, at.column);
  }
  QaplibInstance inst;
  inst.n = n;
  inst.first = Matrix(n, n);
  inst.second = Matrix(n, n);
  std::size_t pos = 1;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inst.first.at(i, j) = token_to_double(tokens[pos++]);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) inst.second.at(i, j) = token_to_double(tokens[pos++]);
  return inst;
}

std::string format_qaplib(const QaplibInstance& inst) {
  std::ostringstream out;
  out << inst.n << "\n\n";
  auto emit = [&](const Matrix& m) {
    for (std::size_t i = 0; i < inst.n; ++i) {
      for (std::size_t j = 0; j < inst.n; ++j) {
        if (j) out << ' ';
        out << format_number(m.at(i, j));
      }
      out << '\n';
    }
  };
  emit(inst.first);
  out << '\n';
  emit(inst.second);
  return out.str();
}

VrpSkeleton parse_solomon(std::string_view text, int take_first) {
  if (take_first < 0) throw DomainError("take_first must be nonnegative");
  std::vector<Token> tokens = tokenize(text);
  if (tokens.empty()) throw ParseError("empty Solomon file", 1, 1);

  VrpSkeleton skel;
  skel.name = tokens[0].text;

  auto find_token = [&](const std::string& word) -> std::size_t {
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      std::string upper = tokens[i].text;
      std::transform(upper.begin(), upper.end(), upper.begin(),
                     [](unsigned char c) { return std::toupper(c); });
      if (upper == word) return i;
    }
    throw ParseError("missing " + word + " section", 1, 1);
  };

  const std::size_t vehicle_at = find_token("VEHICLE");
  // VEHICLE / NUMBER CAPACITY header / two values
  if (vehicle_at + 4 >= tokens.size())
    throw ParseError("truncated VEHICLE section", tokens[vehicle_at].line, 1);
  skel.declared_vehicles = static_cast<int>(token_to_long(tokens[vehicle_at + 3]));
  skel.capacity = token_to_double(tokens[vehicle_at + 4]);

  const std::size_t customer_at = find_token("CUSTOMER");
  // Skip the column-header words: everything up to the first numeric token.
  std::size_t pos = customer_at + 1;
  while (pos < tokens.size()) {
    try {
      token_to_double(tokens[pos]);
      break;
    } catch (const ParseError&) {
      ++pos;
    }
  }
  if (pos >= tokens.size())
    throw ParseError("customer table is empty", tokens[customer_at].line, 1);

  std::vector<SolomonRow> rows;
  while (pos < tokens.size()) {
    if (pos + 7 > tokens.size())
      throw ParseError("customer row is truncated", tokens[pos].line,
                       tokens[pos].column);
    SolomonRow r;
    r.id = static_cast<int>(token_to_long(tokens[pos]));
    r.x = token_to_double(tokens[pos + 1]);
    r.y = token_to_double(tokens[pos + 2]);
    r.demand = token_to_double(tokens[pos + 3]);
    r.ready = token_to_double(tokens[pos + 4]);
    r.due = token_to_double(tokens[pos + 5]);
    r.service = token_to_double(tokens[pos + 6]);
    rows.push_back(r);
    pos += 7;
  }
  if (rows.empty())
    throw ParseError("customer table is empty", tokens[customer_at].line, 1);
  if (static_cast<std::size_t>(take_first) + 1 > rows.size())
    throw ParseError("take_first = " + std::to_string(take_first) +
                         " but the table holds only " +
                         std::to_string(rows.size() - 1) + " customers",
                     tokens[customer_at].line, 1);

  const int n = take_first;
  skel.n = n;
  skel.travel = Matrix(n + 2, n + 2);
  auto coord = [&](int node) -> std::pair<double, double> {
    // node 0 and node n+1 are both the depot row.
    const SolomonRow& r = (node == 0 || node == n + 1) ? rows[0] : rows[node];
    return {r.x, r.y};
  };
  for (int a = 0; a <= n + 1; ++a)
    for (int b = 0; b <= n + 1; ++b) {
      const auto [ax, ay] = coord(a);
      const auto [bx, by] = coord(b);
      skel.travel.at(a, b) = std::hypot(ax - bx, ay - by);
    }
  for (int c = 1; c <= n; ++c) {
    skel.service.push_back(rows[c].service);
    skel.due_nominal.push_back(rows[c].ready);
    skel.demand.push_back(rows[c].demand);
  }
  skel.table.assign(rows.begin(), rows.begin() + n + 1);
  return skel;
}

std::string format_solomon(const VrpSkeleton& skeleton) {
  std::ostringstream out;
  out << skeleton.name << "\n\nVEHICLE\nNUMBER CAPACITY\n"
      << skeleton.declared_vehicles << ' ' << format_number(skeleton.capacity)
      << "\n\nCUSTOMER\n"
      << "CUST NO. XCOORD. YCOORD. DEMAND READY TIME DUE DATE SERVICE TIME\n";
  for (const SolomonRow& r : skeleton.table)
    out << r.id << ' ' << format_number(r.x) << ' ' << format_number(r.y) << ' '
        << format_number(r.demand) << ' ' << format_number(r.ready) << ' '
        << format_number(r.due) << ' ' << format_number(r.service) << '\n';
  return out.str();
}

problems::VrpInstance make_vrp_instance(const VrpSkeleton& skeleton, int vehicles,
                                        std::vector<double> due_deviation) {
  return problems::VrpInstance(skeleton.n, vehicles, skeleton.travel,
                               skeleton.service, skeleton.due_nominal,
                               std::move(due_deviation));
}

UncertaintySpec UncertaintySpec::proportional(double factor) {
  if (!(factor >= 0.0)) throw DomainError("proportional factor must be >= 0");
  UncertaintySpec s;
  s.kind = Kind::kProportional;
  s.factor = factor;
  return s;
}

UncertaintySpec UncertaintySpec::uniform_random(std::uint64_t seed) {
  UncertaintySpec s;
  s.kind = Kind::kUniformRandom;
  s.seed = seed;
  return s;
}

UncertaintySpec UncertaintySpec::from_file(std::string path) {
  UncertaintySpec s;
  s.kind = Kind::kFromFile;
  s.path = std::move(path);
  return s;
}

UncertaintySpec UncertaintySpec::parse(const std::string& text) {
  const std::size_t colon = text.find(':');
  if (colon == std::string::npos)
    throw DomainError("uncertainty spec must look like prop:F, uniform:S or file:P");
  const std::string kind = text.substr(0, colon);
  const std::string arg = text.substr(colon + 1);
  if (kind == "prop") return proportional(std::stod(arg));
  if (kind == "uniform") return uniform_random(std::stoull(arg));
  if (kind == "file") return from_file(arg);
  throw DomainError("unknown uncertainty kind '" + kind + "'");
}

std::string UncertaintySpec::str() const {
  switch (kind) {
    case Kind::kProportional:
      return "prop:" + format_number(factor);
    case Kind::kUniformRandom:
      return "uniform:" + std::to_string(seed);
    case Kind::kFromFile:
      return "file:" + path;
  }
  return "?";
}

std::vector<double> generate_uncertainty(const UncertaintySpec& spec,
                                         const std::vector<double>& base) {
  std::vector<double> out(base.size(), 0.0);
  switch (spec.kind) {
    case UncertaintySpec::Kind::kProportional:
      for (std::size_t i = 0; i < base.size(); ++i) out[i] = spec.factor * base[i];
      return out;
    case UncertaintySpec::Kind::kUniformRandom: {
      for (double b : base)
        if (b < 0.0)
          throw DomainError("uniform deviations need a nonnegative base");
      std::mt19937_64 rng(spec.seed);
      for (std::size_t i = 0; i < base.size(); ++i) {
        const double u =
            static_cast<double>(rng() >> 11) * (1.0 / 9007199254740992.0);
        out[i] = u * base[i];
      }
      return out;
    }
    case UncertaintySpec::Kind::kFromFile: {
      std::ifstream in(spec.path);
      if (!in) throw IoError("cannot open deviation file " + spec.path);
      for (std::size_t i = 0; i < base.size(); ++i) {
        if (!(in >> out[i]))
          throw IoError("deviation file " + spec.path + " holds fewer than " +
                        std::to_string(base.size()) + " numbers");
        if (out[i] < 0.0)
          throw DomainError("deviation file contains a negative entry");
      }
      return out;
    }
  }
  throw DomainError("unknown uncertainty kind");
}

Matrix generate_uncertainty(const UncertaintySpec& spec, const Matrix& base) {
  Matrix out(base.rows(), base.cols());
  out.data() = generate_uncertainty(spec, base.data());
  return out;
}

namespace {

void check_sweep(const SweepResult& result) {
  if (result.rows.empty()) throw DomainError("sweep result is empty");
  std::map<std::string, std::map<int, double>> series;
  for (const SweepRow& row : result.rows) {
    auto [it, inserted] = series[row.config].emplace(row.gamma, row.value);
    if (!inserted)
      throw DomainError("duplicate sweep row for config '" + row.config +
                        "', gamma " + std::to_string(row.gamma));
  }
  for (const auto& [config, by_gamma] : series) {
    double prev = -std::numeric_limits<double>::infinity();
    for (const auto& [gamma, value] : by_gamma) {
      if (value < prev - kValueTolerance)
        throw DomainError("sweep values for config '" + config +
                          "' decrease at gamma " + std::to_string(gamma));
      prev = std::max(prev, value);
    }
  }
}

std::string csv_escape(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string sweep_csv_string(const SweepResult& result, bool include_timing) {
  check_sweep(result);
  std::ostringstream out;
  std::string header = kSweepCsvHeader;
  if (!include_timing) header = header.substr(0, header.rfind(",millis"));
  out << header << '\n';
  for (const SweepRow& row : result.rows) {
    out << csv_escape(row.instance) << ',' << row.gamma << ','
        << csv_escape(row.config) << ',' << format_number(row.value) << ','
        << csv_escape(row.winner) << ',' << row.subproblems << ','
        << row.oracle_calls;
    if (include_timing) out << ',' << row.millis;
    out << '\n';
  }
  return out.str();
}

void write_sweep_csv(const SweepResult& result, const std::string& path,
                     bool include_timing) {
  const std::string body = sweep_csv_string(result, include_timing);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << body;
  if (!out) throw IoError("failed while writing " + path);
}

SweepResult parse_sweep_csv(std::string_view text) {
  SweepResult result;
  std::istringstream in{std::string(text)};
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty CSV", 1, 1);
  const bool has_timing = line == kSweepCsvHeader;
  std::string headerless = kSweepCsvHeader;
  headerless = headerless.substr(0, headerless.rfind(",millis"));
  if (!has_timing && line != headerless)
    throw ParseError("unexpected CSV header '" + line + "'", 1, 1);
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::string field;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
      const char c = line[i];
      if (quoted) {
        if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
          field += '"';
          ++i;
        } else if (c == '"') {
          quoted = false;
        } else {
          field += c;
        }
      } else if (c == '"') {
        quoted = true;
      } else if (c == ',') {
        fields.push_back(field);
        field.clear();
      } else {
        field += c;
      }
    }
    fields.push_back(field);
    if (fields.size() != (has_timing ? 8u : 7u))
      throw ParseError("wrong field count in CSV row", lineno, 1);
    SweepRow row;
    row.instance = fields[0];
    row.gamma = std::stoi(fields[1]);
    row.config = fields[2];
    row.value = std::stod(fields[3]);
    row.winner = fields[4];
    row.subproblems = std::stoull(fields[5]);
    row.oracle_calls = std::stoull(fields[6]);
    row.millis = has_timing ? std::stoll(fields[7]) : 0;
    result.rows.push_back(std::move(row));
  }
  return result;
}

std::string sweep_svg_string(const SweepResult& result) {
  check_sweep(result);

  std::map<std::string, std::vector<std::pair<int, double>>> series;
  int gamma_min = result.rows.front().gamma, gamma_max = gamma_min;
  double v_min = result.rows.front().value, v_max = v_min;
  for (const SweepRow& row : result.rows) {
    series[row.config].emplace_back(row.gamma, row.value);
    gamma_min = std::min(gamma_min, row.gamma);
    gamma_max = std::max(gamma_max, row.gamma);
    v_min = std::min(v_min, row.value);
    v_max = std::max(v_max, row.value);
  }
  for (auto& [config, pts] : series) std::sort(pts.begin(), pts.end());
  if (gamma_max == gamma_min) gamma_max = gamma_min + 1;
  if (v_max <= v_min) v_max = v_min + 1.0;

  const double width = 640, height = 480;
  const double left = 70, right = 20, top = 24, bottom = 56;
  const double plot_w = width - left - right;
  const double plot_h = height - top - bottom;
  auto px = [&](double gamma) {
    return left + plot_w * (gamma - gamma_min) / (gamma_max - gamma_min);
  };
  auto py = [&](double value) {
    return top + plot_h * (1.0 - (value - v_min) / (v_max - v_min));
  };

  static const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                  "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " "
      << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\""
      << left + plot_w << "\" y2=\"" << top + plot_h
      << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left
      << "\" y2=\"" << top + plot_h << "\" stroke=\"black\"/>\n";

  for (int g = gamma_min; g <= gamma_max; ++g) {
    svg << "<line x1=\"" << px(g) << "\" y1=\"" << top + plot_h << "\" x2=\""
        << px(g) << "\" y2=\"" << top + plot_h + 5 << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << px(g) << "\" y=\"" << top + plot_h + 20
        << "\" font-size=\"11\" text-anchor=\"middle\">" << g << "</text>\n";
  }
  for (int tick = 0; tick <= 4; ++tick) {
    const double v = v_min + (v_max - v_min) * tick / 4.0;
    svg << "<line x1=\"" << left - 5 << "\" y1=\"" << py(v) << "\" x2=\"" << left
        << "\" y2=\"" << py(v) << "\" stroke=\"black\"/>\n"
        << "<text x=\"" << left - 9 << "\" y=\"" << py(v) + 4
        << "\" font-size=\"11\" text-anchor=\"end\">" << format_number(v)
        << "</text>\n";
  }
  svg << "<text x=\"" << left + plot_w / 2 << "\" y=\"" << height - 14
      << "\" font-size=\"13\" text-anchor=\"middle\">Γ</text>\n";
  svg << "<text x=\"16\" y=\"" << top + plot_h / 2
      << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
      << top + plot_h / 2 << ")\">objective value</text>\n";

  std::size_t idx = 0;
  double legend_y = top + 10;
  for (const auto& [config, pts] : series) {
    const char* color = palette[idx % (sizeof(palette) / sizeof(palette[0]))];
    svg << "<polyline fill=\"none\" stroke=\"" << color << "\" points=\"";
    for (const auto& [gamma, value] : pts)
      svg << px(gamma) << ',' << py(value) << ' ';
    svg << "\"/>\n";
    for (const auto& [gamma, value] : pts)
      svg << "<circle cx=\"" << px(gamma) << "\" cy=\"" << py(value)
          << "\" r=\"2.5\" fill=\"" << color << "\"/>\n";
    svg << "<text x=\"" << left + plot_w - 6 << "\" y=\"" << legend_y
        << "\" font-size=\"11\" text-anchor=\"end\" fill=\"" << color << "\">"
        << config << "</text>\n";
    legend_y += 14;
    ++idx;
  }
  svg << "</svg>\n";
  return svg.str();
}

void write_sweep_svg(const SweepResult& result, const std::string& path) {
  const std::string body = sweep_svg_string(result);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << body;
  if (!out) throw IoError("failed while writing " + path);
}

}  // namespace gammarobust::io
