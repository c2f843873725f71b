#include "gapcount/cli/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <toml.hpp>

#include "gapcount/error.hpp"

namespace gapcount::cli {

struct ExperimentConfig::Impl {
  toml::table root;
};

ExperimentConfig::ExperimentConfig() : impl_(std::make_unique<Impl>()) {}
ExperimentConfig::ExperimentConfig(const ExperimentConfig& other)
    : impl_(std::make_unique<Impl>(*other.impl_)), source_(other.source_) {}
ExperimentConfig& ExperimentConfig::operator=(const ExperimentConfig& other) {
  if (this != &other) {
    impl_ = std::make_unique<Impl>(*other.impl_);
    source_ = other.source_;
  }
  return *this;
}
ExperimentConfig::ExperimentConfig(ExperimentConfig&&) noexcept = default;
ExperimentConfig& ExperimentConfig::operator=(ExperimentConfig&&) noexcept = default;
ExperimentConfig::~ExperimentConfig() = default;

ExperimentConfig ExperimentConfig::from_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_string(ss.str(), path);
}

ExperimentConfig ExperimentConfig::from_string(std::string_view text, std::string_view source) {
  ExperimentConfig c;
  c.source_ = std::string(source);
  try {
    c.impl_->root = toml::parse(text, source);
  } catch (const toml::parse_error& e) {
    std::ostringstream os;
    os << source << ":" << e.source().begin.line << ":" << e.source().begin.column << ": " << e.description();
    throw InputError(os.str());
  }
  return c;
}

namespace {

std::string key(std::string_view path) { return std::string(path); }

[[noreturn]] void type_error(std::string_view path, const char* expected) {
  throw InputError("config key '" + key(path) + "' must be " + expected);
}

[[noreturn]] void missing(std::string_view path) {
  throw InputError("missing config key '" + key(path) + "'");
}

std::optional<double> as_number(const toml::node& n) {
  if (auto v = n.as_floating_point()) return v->get();
  if (auto v = n.as_integer()) return static_cast<double>(v->get());
  return std::nullopt;
}

// Splits "a.b.c" into the parent table path and the leaf key.
std::pair<std::string, std::string> split_path(std::string_view path) {
  const auto dot = path.rfind('.');
  if (dot == std::string_view::npos) return {"", std::string(path)};
  return {std::string(path.substr(0, dot)), std::string(path.substr(dot + 1))};
}

toml::table& table_at(toml::table& root, const std::string& parent) {
  toml::table* t = &root;
  std::size_t start = 0;
  while (start < parent.size()) {
    const auto dot = parent.find('.', start);
    const std::string part = parent.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
    auto* next = t->get_as<toml::table>(part);
    if (!next) {
      t->insert_or_assign(part, toml::table{});
      next = t->get_as<toml::table>(part);
    }
    t = next;
    if (dot == std::string::npos) break;
    start = dot + 1;
  }
  return *t;
}

nlohmann::json node_to_json(const toml::node& n) {
  if (auto t = n.as_table()) {
    nlohmann::json o = nlohmann::json::object();
    for (const auto& [k, v] : *t) o[std::string(k.str())] = node_to_json(v);
    return o;
  }
  if (auto a = n.as_array()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& v : *a) arr.push_back(node_to_json(v));
    return arr;
  }
  if (auto v = n.as_integer()) return v->get();
  if (auto v = n.as_floating_point()) return v->get();
  if (auto v = n.as_boolean()) return v->get();
  if (auto v = n.as_string()) return v->get();
  return nullptr;
}

}  // namespace

bool ExperimentConfig::has(std::string_view path) const {
  return static_cast<bool>(impl_->root.at_path(path));
}

double ExperimentConfig::number(std::string_view path) const {
  auto node = impl_->root.at_path(path);
  if (!node) missing(path);
  auto v = as_number(*node.node());
  if (!v) type_error(path, "a number");
  return *v;
}

double ExperimentConfig::number(std::string_view path, double fallback) const {
  return has(path) ? number(path) : fallback;
}

double ExperimentConfig::positive(std::string_view path, double fallback) const {
  const double v = number(path, fallback);
  if (!(v > 0.0)) type_error(path, "a positive number");
  return v;
}

long ExperimentConfig::integer(std::string_view path) const {
  auto node = impl_->root.at_path(path);
  if (!node) missing(path);
  auto v = node.node()->as_integer();
  if (!v) type_error(path, "an integer");
  return static_cast<long>(v->get());
}

long ExperimentConfig::integer(std::string_view path, long fallback) const {
  return has(path) ? integer(path) : fallback;
}

bool ExperimentConfig::flag(std::string_view path, bool fallback) const {
  auto node = impl_->root.at_path(path);
  if (!node) return fallback;
  auto v = node.node()->as_boolean();
  if (!v) type_error(path, "true or false");
  return v->get();
}

std::string ExperimentConfig::text(std::string_view path, std::string_view fallback) const {
  auto node = impl_->root.at_path(path);
  if (!node) return std::string(fallback);
  auto v = node.node()->as_string();
  if (!v) type_error(path, "a string");
  return v->get();
}

std::vector<double> ExperimentConfig::numbers(std::string_view path) const {
  auto node = impl_->root.at_path(path);
  if (!node) missing(path);
  auto arr = node.node()->as_array();
  if (!arr) type_error(path, "an array of numbers");
  std::vector<double> out;
  for (const auto& el : *arr) {
    auto v = as_number(el);
    if (!v) type_error(path, "an array of numbers");
    out.push_back(*v);
  }
  return out;
}

std::vector<long> ExperimentConfig::integers(std::string_view path) const {
  auto node = impl_->root.at_path(path);
  if (!node) missing(path);
  auto arr = node.node()->as_array();
  if (!arr) type_error(path, "an array of integers");
  std::vector<long> out;
  for (const auto& el : *arr) {
    auto v = el.as_integer();
    if (!v) type_error(path, "an array of integers");
    out.push_back(static_cast<long>(v->get()));
  }
  return out;
}

void ExperimentConfig::set(std::string_view path, double v) {
  auto [parent, leaf] = split_path(path);
  table_at(impl_->root, parent).insert_or_assign(leaf, v);
}

void ExperimentConfig::set(std::string_view path, long v) {
  auto [parent, leaf] = split_path(path);
  table_at(impl_->root, parent).insert_or_assign(leaf, static_cast<int64_t>(v));
}

void ExperimentConfig::set(std::string_view path, bool v) {
  auto [parent, leaf] = split_path(path);
  table_at(impl_->root, parent).insert_or_assign(leaf, v);
}

void ExperimentConfig::set(std::string_view path, std::string_view v) {
  auto [parent, leaf] = split_path(path);
  table_at(impl_->root, parent).insert_or_assign(leaf, std::string(v));
}

void ExperimentConfig::set(std::string_view path, const std::vector<double>& v) {
  auto [parent, leaf] = split_path(path);
  toml::array arr;
  for (double x : v) arr.push_back(x);
  table_at(impl_->root, parent).insert_or_assign(leaf, std::move(arr));
}

void ExperimentConfig::set(std::string_view path, const std::vector<long>& v) {
  auto [parent, leaf] = split_path(path);
  toml::array arr;
  for (long x : v) arr.push_back(static_cast<int64_t>(x));
  table_at(impl_->root, parent).insert_or_assign(leaf, std::move(arr));
}

PeriodicBackground ExperimentConfig::background() const {
  const long p = integer("background.period");
  if (p < 1) type_error("background.period", "a positive integer");
  std::vector<double> a = numbers("background.a");
  std::vector<double> b = numbers("background.b");
  if (a.size() != static_cast<std::size_t>(p))
    throw InputError("config key 'background.a' must have 'background.period' = " + std::to_string(p) + " entries");
  if (b.size() != static_cast<std::size_t>(p))
    throw InputError("config key 'background.b' must have 'background.period' = " + std::to_string(p) + " entries");
  return PeriodicBackground(std::move(a), std::move(b));
}

namespace {

SequenceGenerator generator(const ExperimentConfig& c, const std::string& base) {
  SequenceGenerator g;
  g.amplitude = c.number(base + ".amplitude", 0.0);
  g.power = c.number(base + ".power", 2.0);
  g.log_power = c.number(base + ".log_power", 0.0);
  g.alternating = c.flag(base + ".alternating", false);
  return g;
}

}  // namespace

PerturbationSpec ExperimentConfig::perturbation() const {
  PerturbationSpec spec;
  const std::string kind = text("perturbation.kind", "none");
  spec.allow_non_summable = flag("perturbation.allow_non_summable", false);
  if (kind == "none") return spec;
  if (kind == "explicit") {
    spec.kind = PerturbationKind::kExplicit;
    if (!has("perturbation.sites")) missing("perturbation.sites");
    auto arr = impl_->root.at_path("perturbation.sites").as_array();
    if (!arr) type_error("perturbation.sites", "an array of [n, da, db] triples");
    for (const auto& el : *arr) {
      auto t = el.as_array();
      if (!t || t->size() != 3 || !(*t)[0].as_integer())
        type_error("perturbation.sites", "an array of [n, da, db] triples");
      auto da = as_number((*t)[1]);
      auto db = as_number((*t)[2]);
      if (!da || !db) type_error("perturbation.sites", "an array of [n, da, db] triples");
      const long n = static_cast<long>((*t)[0].as_integer()->get());
      if (spec.sites.count(n)) throw InputError("config key 'perturbation.sites' lists site " + std::to_string(n) + " twice");
      spec.sites[n] = {*da, *db};
    }
    return spec;
  }
  if (kind == "power" || kind == "log") {
    spec.kind = kind == "power" ? PerturbationKind::kPowerLaw : PerturbationKind::kLogWeight;
    spec.da = generator(*this, "perturbation.da");
    spec.db = generator(*this, "perturbation.db");
    if (spec.kind == PerturbationKind::kPowerLaw && (spec.da.log_power != 0.0 || spec.db.log_power != 0.0))
      throw InputError("config key 'perturbation.kind': log_power needs kind = \"log\"");
    return spec;
  }
  throw InputError("config key 'perturbation.kind' must be one of none, explicit, power, log (got '" + kind + "')");
}

std::string ExperimentConfig::to_toml() const {
  std::ostringstream os;
  os << toml::toml_formatter(impl_->root, toml::toml_formatter::default_flags & ~toml::format_flags::indentation);
  return os.str();
}

nlohmann::json ExperimentConfig::to_json() const { return node_to_json(impl_->root); }

namespace {

long to_long(std::string_view s, std::string_view what) {
  long v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last)
    throw InputError("cannot parse '" + std::string(s) + "' as an integer in " + std::string(what));
  return v;
}

double to_double(std::string_view s, std::string_view what) {
  double v = 0.0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (first != last && *first == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last || first == last)
    throw InputError("cannot parse '" + std::string(s) + "' as a number in " + std::string(what));
  return v;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  return s;
}

}  // namespace

Window parse_window(std::string_view text) {
  text = trim(text);
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    const long h = to_long(text, "window");
    if (h < 0) throw InputError("window half width must be >= 0");
    return Window::symmetric(h);
  }
  const Window w{to_long(trim(text.substr(0, dots)), "window"), to_long(trim(text.substr(dots + 2)), "window")};
  if (w.empty()) throw InputError("window '" + std::string(text) + "' is empty");
  return w;
}

std::pair<long, long> parse_range(std::string_view text) {
  text = trim(text);
  const auto dots = text.find("..");
  if (dots == std::string_view::npos) {
    const long v = to_long(text, "range");
    return {v, v};
  }
  const long lo = to_long(trim(text.substr(0, dots)), "range");
  const long hi = to_long(trim(text.substr(dots + 2)), "range");
  if (hi < lo) throw InputError("range '" + std::string(text) + "' is empty");
  return {lo, hi};
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  while (true) {
    const auto comma = text.find(',');
    out.push_back(to_double(trim(text.substr(0, comma)), "list"));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<std::pair<long, long>> parse_pairs(std::string_view text) {
  std::vector<std::pair<long, long>> out;
  while (!trim(text).empty()) {
    const auto semi = text.find(';');
    const std::string_view item = trim(text.substr(0, semi));
    const auto comma = item.find(',');
    if (comma == std::string_view::npos) throw InputError("pair '" + std::string(item) + "' needs the form n,m");
    out.emplace_back(to_long(trim(item.substr(0, comma)), "pairs"), to_long(trim(item.substr(comma + 1)), "pairs"));
    if (semi == std::string_view::npos) break;
    text.remove_prefix(semi + 1);
  }
  if (out.empty()) throw InputError("no pairs given");
  return out;
}

}  // namespace gapcount::cli
