#include "rtr/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <map>
#include <set>
#include <sstream>

namespace rtr {

namespace {

struct Token {
  std::string text;
  std::size_t column;  // 1-based
};

std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  return std::all_of(s.begin(), s.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

// Splits a value token into a numeric literal and a suffix, applies the
// suffix as a textual decimal-exponent shift, and converts with a single
// strtod call so the result is correctly rounded (e.g. "10u" is exactly
// the double 1e-5).
double parse_value(const Token& tok, std::size_t line_no) {
  const std::string& s = tok.text;
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  std::size_t digits = 0;
  while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  if (i < s.size() && s[i] == '.') {
    ++i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i, ++digits;
  }
  if (digits == 0)
    throw ParseError(line_no, tok.column, "expected a numeric value, got '" + s + "'");
  bool has_exponent = false;
  if (i < s.size() && (s[i] == 'e' || s[i] == 'E')) {
    std::size_t j = i + 1;
    if (j < s.size() && (s[j] == '+' || s[j] == '-')) ++j;
    std::size_t exp_digits = 0;
    while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j, ++exp_digits;
    if (exp_digits > 0) {
      has_exponent = true;
      i = j;
    }
  }
  std::string number = s.substr(0, i);
  std::string suffix = lower(s.substr(i));
  if (!suffix.empty()) {
    if (has_exponent)
      throw ParseError(line_no, tok.column + i,
                       "unknown suffix '" + s.substr(i) + "' in '" + s + "'");
    static const std::map<std::string, int> suffixes = {
        {"p", -12}, {"n", -9}, {"u", -6}, {"m", -3}, {"k", 3}, {"meg", 6}};
    auto it = suffixes.find(suffix);
    if (it == suffixes.end())
      throw ParseError(line_no, tok.column + i,
                       "unknown suffix '" + s.substr(i) + "' in '" + s + "'");
    number += "e" + std::to_string(it->second);
  }
  errno = 0;
  char* end = nullptr;
  double v = std::strtod(number.c_str(), &end);
  if (end == nullptr || *end != '\0')
    throw ParseError(line_no, tok.column, "expected a numeric value, got '" + s + "'");
  if (!std::isfinite(v))
    throw ParseError(line_no, tok.column, "value out of range: '" + s + "'");
  return v;
}

void require_identifier(const Token& tok, std::size_t line_no, const char* what) {
  if (!is_identifier(tok.text))
    throw ParseError(line_no, tok.column,
                     std::string("invalid ") + what + " '" + tok.text + "'");
}

void require_count(const std::vector<Token>& toks, std::size_t line_no, std::size_t n,
                   const char* form) {
  if (toks.size() != n)
    throw ParseError(line_no, toks.size() > n ? toks[n].column : toks[0].column,
                     std::string("expected ") + form);
}

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& what_arg)
    : std::runtime_error("line " + std::to_string(line) + ", col " + std::to_string(column) +
                         ": " + what_arg),
      line_(line),
      column_(column) {}

const Element* Circuit::find(const std::string& name) const {
  for (const auto& e : elements)
    if (e.name == name) return &e;
  return nullptr;
}

std::vector<std::string> Circuit::node_order() const {
  std::vector<std::string> order;
  std::set<std::string> seen;
  for (const auto& e : elements) {
    if (e.kind == ElementKind::coupling) continue;
    for (const auto& n : e.nodes) {
      if (n == ground) continue;
      if (seen.insert(n).second) order.push_back(n);
    }
  }
  return order;
}

std::size_t Circuit::count(ElementKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(elements.begin(), elements.end(),
                    [kind](const Element& e) { return e.kind == kind; }));
}

void Circuit::validate() const {
  std::set<std::string> nodes{ground};
  for (const auto& e : elements) {
    if (e.kind == ElementKind::coupling) continue;
    nodes.insert(e.nodes[0]);
    nodes.insert(e.nodes[1]);
  }
  for (const auto& p : probes)
    if (!nodes.contains(p)) throw CircuitError("probe on undeclared node '" + p + "'");
  for (const auto& e : elements) {
    if (e.kind != ElementKind::coupling) continue;
    for (const auto& ref : e.nodes) {
      const Element* l = find(ref);
      if (l == nullptr || l->kind != ElementKind::inductor)
        throw CircuitError("coupling '" + e.name + "' references missing inductor '" + ref +
                           "'");
    }
    if (e.nodes[0] == e.nodes[1])
      throw CircuitError("coupling '" + e.name + "' must reference two distinct inductors");
  }
  // Flood from ground across element connectivity.
  std::set<std::string> reached{ground};
  bool grew = true;
  while (grew) {
    grew = false;
    for (const auto& e : elements) {
      if (e.kind == ElementKind::coupling) continue;
      bool a = reached.contains(e.nodes[0]);
      bool b = reached.contains(e.nodes[1]);
      if (a != b) {
        reached.insert(a ? e.nodes[1] : e.nodes[0]);
        grew = true;
      }
    }
  }
  for (const auto& n : nodes)
    if (!reached.contains(n))
      throw CircuitError("node '" + n + "' is not reachable from ground");
}

Circuit parse_netlist(const std::string& text) {
  Circuit circuit;
  std::set<std::string> names;
  std::vector<std::pair<Token, std::size_t>> probe_tokens;     // token, line
  std::vector<std::pair<std::size_t, std::size_t>> k_origins;  // line, column

  std::size_t line_no = 0;
  std::size_t pos = 0;
  bool ended = false;
  while (pos <= text.size() && !ended) {
    std::size_t eol = text.find('\n', pos);
    std::string line = text.substr(pos, eol == std::string::npos ? std::string::npos
                                                                 : eol - pos);
    pos = eol == std::string::npos ? text.size() + 1 : eol + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();

    auto toks = tokenize(line);
    if (toks.empty()) continue;
    const std::string& head = toks[0].text;
    if (head[0] == '*' || head[0] == '#') continue;

    if (head[0] == '.') {
      std::string directive = lower(head);
      if (directive == ".end") {
        ended = true;
        continue;
      }
      if (directive == ".probe") {
        require_count(toks, line_no, 2, ".probe v(<node>)");
        std::string arg = toks[1].text;
        std::string arg_l = lower(arg);
        if (arg_l.size() < 4 || arg_l.substr(0, 2) != "v(" || arg_l.back() != ')')
          throw ParseError(line_no, toks[1].column, "expected v(<node>), got '" + arg + "'");
        Token node{arg.substr(2, arg.size() - 3), toks[1].column + 2};
        require_identifier(node, line_no, "probe node");
        probe_tokens.emplace_back(node, line_no);
        continue;
      }
      throw ParseError(line_no, toks[0].column, "unrecognized directive '" + head + "'");
    }

    char kind_letter = static_cast<char>(std::tolower(static_cast<unsigned char>(head[0])));
    require_identifier(toks[0], line_no, "element name");
    if (names.contains(head))
      throw ParseError(line_no, toks[0].column, "duplicate element name '" + head + "'");

    Element e;
    e.name = head;
    switch (kind_letter) {
      case 'r':
      case 'l':
      case 'c': {
        e.kind = kind_letter == 'r'   ? ElementKind::resistor
                 : kind_letter == 'l' ? ElementKind::inductor
                                      : ElementKind::capacitor;
        require_count(toks, line_no, 4, "<name> <node> <node> <value>");
        require_identifier(toks[1], line_no, "node");
        require_identifier(toks[2], line_no, "node");
        e.nodes = {toks[1].text, toks[2].text};
        e.value = parse_value(toks[3], line_no);
        if (e.value <= 0.0)
          throw ParseError(line_no, toks[3].column,
                           "nonpositive component value for '" + e.name + "'");
        break;
      }
      case 'v': {
        e.kind = ElementKind::ac_source;
        if (toks.size() != 5 && toks.size() != 6)
          throw ParseError(line_no, toks.back().column,
                           "expected <name> <node+> <node-> AC <mag> [phase]");
        require_identifier(toks[1], line_no, "node");
        require_identifier(toks[2], line_no, "node");
        if (lower(toks[3].text) != "ac")
          throw ParseError(line_no, toks[3].column,
                           "expected AC, got '" + toks[3].text + "'");
        e.nodes = {toks[1].text, toks[2].text};
        e.value = parse_value(toks[4], line_no);
        if (e.value < 0.0)
          throw ParseError(line_no, toks[4].column, "negative source magnitude");
        if (toks.size() == 6) e.phase_deg = parse_value(toks[5], line_no);
        break;
      }
      case 'k': {
        e.kind = ElementKind::coupling;
        k_origins.emplace_back(line_no, toks[0].column);
        require_count(toks, line_no, 4, "<name> <inductor> <inductor> <k>");
        require_identifier(toks[1], line_no, "inductor reference");
        require_identifier(toks[2], line_no, "inductor reference");
        e.nodes = {toks[1].text, toks[2].text};
        e.value = parse_value(toks[3], line_no);
        if (e.value <= 0.0 || e.value > 1.0)
          throw ParseError(line_no, toks[3].column,
                           "coupling coefficient must lie in (0, 1]");
        break;
      }
      default:
        throw ParseError(line_no, toks[0].column,
                         std::string("unknown element kind '") + head[0] + "'");
    }
    names.insert(e.name);
    circuit.elements.push_back(std::move(e));
  }

  // Deferred checks: forward references are legal inside the file.
  std::set<std::string> nodes{Circuit::ground};
  for (const auto& e : circuit.elements) {
    if (e.kind == ElementKind::coupling) continue;
    nodes.insert(e.nodes[0]);
    nodes.insert(e.nodes[1]);
  }
  for (const auto& [tok, ln] : probe_tokens) {
    if (!nodes.contains(tok.text))
      throw ParseError(ln, tok.column, "probe on undeclared node '" + tok.text + "'");
    circuit.probes.push_back(tok.text);
  }
  std::size_t k_index = 0;
  for (const auto& e : circuit.elements) {
    if (e.kind != ElementKind::coupling) continue;
    auto [ln, col] = k_origins[k_index++];
    for (const auto& ref : e.nodes) {
      const Element* l = circuit.find(ref);
      if (l == nullptr || l->kind != ElementKind::inductor)
        throw ParseError(ln, col, "coupling '" + e.name + "' references missing inductor '" +
                                      ref + "'");
    }
    if (e.nodes[0] == e.nodes[1])
      throw ParseError(ln, col,
                       "coupling '" + e.name + "' must reference two distinct inductors");
  }
  return circuit;
}

std::string format_value(double value) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), value);
  std::string s(buf, res.ptr);
  auto e = s.find('e');
  if (e == std::string::npos) return s;
  std::string mantissa = s.substr(0, e);
  std::string exp = s.substr(e + 1);
  bool neg = !exp.empty() && exp[0] == '-';
  if (!exp.empty() && (exp[0] == '+' || exp[0] == '-')) exp.erase(0, 1);
  while (exp.size() > 1 && exp[0] == '0') exp.erase(0, 1);
  return mantissa + "e" + (neg ? "-" : "") + exp;
}

std::string emit_netlist(const Circuit& circuit) {
  std::ostringstream out;
  for (const auto& e : circuit.elements) {
    switch (e.kind) {
      case ElementKind::resistor:
      case ElementKind::inductor:
      case ElementKind::capacitor:
      case ElementKind::coupling:
        out << e.name << ' ' << e.nodes[0] << ' ' << e.nodes[1] << ' '
            << format_value(e.value) << '\n';
        break;
      case ElementKind::ac_source:
        out << e.name << ' ' << e.nodes[0] << ' ' << e.nodes[1] << " AC "
            << format_value(e.value);
        if (e.phase_deg != 0.0) out << ' ' << format_value(e.phase_deg);
        out << '\n';
        break;
    }
  }
  for (const auto& p : circuit.probes) out << ".probe v(" << p << ")\n";
  return out.str();
}

}  // namespace rtr
