#include "unidemand/instance_json.hpp"

#include <fstream>
#include <sstream>
#include <vector>

#include "unidemand/errors.hpp"

namespace unidemand {
namespace {

using nlohmann::json;

// DOM builder for nlohmann's SAX interface that keeps float literals verbatim.
class ExactSax {
 public:
  explicit ExactSax(json& root) : root_(root) {}

  bool null() { return put(json(nullptr)); }
  bool boolean(bool v) { return put(json(v)); }
  bool number_integer(json::number_integer_t v) { return put(json(v)); }
  bool number_unsigned(json::number_unsigned_t v) { return put(json(v)); }
  bool number_float(json::number_float_t, const json::string_t& text) { return put(json(text)); }
  bool string(json::string_t& v) { return put(json(v)); }
  bool binary(json::binary_t& v) { return put(json::binary(v)); }

  bool start_object(std::size_t) {
    json* slot = insert(json::object());
    stack_.push_back(slot);
    return true;
  }
  bool key(json::string_t& k) {
    pending_key_ = k;
    return true;
  }
  bool end_object() {
    stack_.pop_back();
    return true;
  }
  bool start_array(std::size_t) {
    json* slot = insert(json::array());
    stack_.push_back(slot);
    return true;
  }
  bool end_array() {
    stack_.pop_back();
    return true;
  }

  bool parse_error(std::size_t position, const std::string&, const nlohmann::detail::exception& e) {
    error_position_ = position;
    error_message_ = e.what();
    return false;
  }

  std::size_t error_position() const { return error_position_; }
  const std::string& error_message() const { return error_message_; }

 private:
  bool put(json value) {
    insert(std::move(value));
    return true;
  }

  json* insert(json value) {
    if (stack_.empty()) {
      root_ = std::move(value);
      return &root_;
    }
    json& parent = *stack_.back();
    if (parent.is_array()) {
      parent.push_back(std::move(value));
      return &parent.back();
    }
    json& slot = parent[pending_key_];
    slot = std::move(value);
    return &slot;
  }

  json& root_;
  std::vector<json*> stack_;
  std::string pending_key_;
  std::size_t error_position_ = 0;
  std::string error_message_;
};

std::string line_column(std::string_view text, std::size_t position) {
  std::size_t line = 1;
  std::size_t column = 1;
  // nlohmann reports the 1-based byte count consumed when the error was seen.
  const std::size_t end = std::min(position > 0 ? position - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

const json& require(const json& object, const char* key, const std::string& where) {
  const auto it = object.find(key);
  if (it == object.end()) throw InputError(where + ": missing field \"" + key + "\"");
  return *it;
}

ValueDistribution item_from_json(const json& item, std::size_t index) {
  const std::string where = "item " + std::to_string(index);
  if (!item.is_object()) throw InputError(where + ": expected an object");
  const json& kind_field = require(item, "kind", where);
  if (!kind_field.is_string()) throw InputError(where + ": \"kind\" must be a string");
  const std::string kind = kind_field.get<std::string>();
  try {
    if (kind == "discrete") {
      const json& support = require(item, "support", where);
      const json& masses = require(item, "masses", where);
      if (!support.is_array() || !masses.is_array()) {
        throw InputError(where + ": support and masses must be arrays");
      }
      std::vector<Rational> s;
      std::vector<Rational> m;
      for (const auto& v : support) s.push_back(json_rational(v, where + " support"));
      for (const auto& v : masses) m.push_back(json_rational(v, where + " masses"));
      return DiscreteDistribution(std::move(s), std::move(m));
    }
    if (kind == "exponential") {
      return CdfOracle::exponential(json_double(require(item, "lambda", where), where));
    }
    if (kind == "uniform") {
      return CdfOracle::uniform(json_double(require(item, "a", where), where),
                                json_double(require(item, "b", where), where));
    }
    if (kind == "truncated_normal") {
      return CdfOracle::truncated_normal(json_double(require(item, "mu", where), where),
                                         json_double(require(item, "sigma", where), where));
    }
    if (kind == "power_tail") {
      return CdfOracle::power_tail(json_double(require(item, "alpha", where), where));
    }
  } catch (const DomainError& e) {
    throw InputError(where + ": " + e.what());
  }
  throw InputError(where + ": unknown distribution family \"" + kind + "\"");
}

}  // namespace

json parse_json_exact(std::string_view text) {
  json root;
  ExactSax sax(root);
  const bool ok = json::sax_parse(text.begin(), text.end(), &sax);
  if (!ok) {
    throw InputError("malformed JSON at " + line_column(text, sax.error_position()) + ": " +
                     sax.error_message());
  }
  return root;
}

Rational json_rational(const json& value, const std::string& what) {
  try {
    if (value.is_number_integer()) {
      return value.is_number_unsigned() ? Rational(std::to_string(value.get<std::uint64_t>()))
                                        : Rational(std::to_string(value.get<std::int64_t>()));
    }
    if (value.is_number_float()) return rational_from_double(value.get<double>());
    if (value.is_string()) return parse_rational(value.get<std::string>());
  } catch (const InputError&) {
    throw;
  } catch (const std::exception& e) {
    throw InputError(what + ": " + e.what());
  }
  throw InputError(what + ": expected a number or a \"p/q\" string");
}

double json_double(const json& value, const std::string& what) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) {
    // Raw float text from parse_json_exact, or a rational string.
    const std::string text = value.get<std::string>();
    if (text.find('/') != std::string::npos) return to_double(parse_rational(text));
    try {
      std::size_t used = 0;
      const double x = std::stod(text, &used);
      if (used == text.size()) return x;
    } catch (const std::exception&) {
    }
  }
  throw InputError(what + ": expected a number");
}

Instance instance_from_json(const json& document) {
  if (!document.is_object()) throw InputError("instance must be a JSON object");
  Instance instance;
  if (const auto it = document.find("tie_break"); it != document.end()) {
    if (!it->is_string()) throw InputError("tie_break must be a string");
    instance.tie_break = parse_tie_break(it->get<std::string>());
  }
  if (const auto it = document.find("class"); it != document.end()) {
    const std::string tag = it->is_string() ? it->get<std::string>() : "";
    if (tag == "mhr") {
      instance.value_class = ValueClass::Mhr;
    } else if (tag == "regular") {
      instance.value_class = ValueClass::Regular;
    } else {
      throw InputError("class must be \"mhr\" or \"regular\"");
    }
  }
  const json& items = require(document, "items", "instance");
  if (!items.is_array() || items.empty()) throw InputError("items must be a nonempty array");
  for (std::size_t i = 0; i < items.size(); ++i) {
    instance.items.push_back(item_from_json(items[i], i));
  }
  return instance;
}

Instance load_instance(std::string_view text) { return instance_from_json(parse_json_exact(text)); }

Instance load_instance_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_instance(buffer.str());
}

json item_to_json(const ValueDistribution& item) {
  if (const auto* d = std::get_if<DiscreteDistribution>(&item)) {
    json support = json::array();
    json masses = json::array();
    for (const auto& v : d->support()) support.push_back(to_string(v));
    for (const auto& m : d->masses()) masses.push_back(to_string(m));
    return {{"kind", "discrete"}, {"support", support}, {"masses", masses}};
  }
  const auto& oracle = std::get<CdfOracle>(item);
  json out;
  switch (oracle.family()) {
    case Family::Exponential:
      out = {{"kind", "exponential"}, {"lambda", oracle.param1()}};
      break;
    case Family::Uniform:
      out = {{"kind", "uniform"}, {"a", oracle.param1()}, {"b", oracle.param2()}};
      break;
    case Family::TruncatedNormal:
      out = {{"kind", "truncated_normal"}, {"mu", oracle.param1()}, {"sigma", oracle.param2()}};
      break;
    case Family::PowerTail:
      out = {{"kind", "power_tail"}, {"alpha", oracle.param1()}};
      break;
  }
  if (const auto& t = oracle.truncation()) {
    out["truncation"] = {{"low_cut", t->low_cut}, {"low_point", t->low_point},
                         {"high_cut", t->high_cut}};
  }
  return out;
}

json instance_to_json(const Instance& instance) {
  json items = json::array();
  for (const auto& item : instance.items) items.push_back(item_to_json(item));
  json out = {{"tie_break", to_string(instance.tie_break)}, {"items", items}};
  if (instance.value_class != ValueClass::Untagged) out["class"] = to_string(instance.value_class);
  return out;
}

}  // namespace unidemand
