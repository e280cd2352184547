#include "gtce/lp_format.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <optional>
#include <sstream>

#include "gtce/format.hpp"

namespace gtce {

namespace {

bool name_char(char c)
{
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' || c == ']' || c == '#' ||
         c == '$' || c == '%' || c == '&' || c == '(' || c == ')' || c == '/' || c == ',' || c == ';' || c == '?' ||
         c == '@' || c == '{' || c == '}' || c == '~' || c == '|' || c == '!' || c == '\'' || c == '"' || c == '`';
}

std::string lower(std::string s)
{
  for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return s;
}

std::string bound_text(double v)
{
  if (v == kInfinity) return "+inf";
  if (v == -kInfinity) return "-inf";
  return fmt_num(v);
}

void write_expression(std::ostringstream& out, const LinearModel& model, const std::vector<Term>& terms)
{
  int on_line = 0;
  bool first = true;
  for (const auto& t : terms) {
    if (on_line == 8) {
      out << "\n  ";
      on_line = 0;
    }
    const double c = t.coef;
    const std::string& name = model.var(t.var).name;
    if (first) {
      if (c == 1.0) out << name;
      else if (c == -1.0) out << "- " << name;
      else if (c < 0) out << "- " << fmt_num(-c) << ' ' << name;
      else out << fmt_num(c) << ' ' << name;
    } else {
      out << (c < 0 ? " - " : " + ");
      const double a = std::abs(c);
      if (a != 1.0) out << fmt_num(a) << ' ';
      out << name;
    }
    first = false;
    ++on_line;
  }
}

}  // namespace

bool is_valid_lp_name(const std::string& name)
{
  if (name.empty() || name.size() > 255) return false;
  const char c0 = name.front();
  if (std::isdigit(static_cast<unsigned char>(c0)) || c0 == '.') return false;
  if (c0 == 'e' || c0 == 'E') {
    // "e12" would read as an exponent continuation
    if (name.size() > 1 && std::isdigit(static_cast<unsigned char>(name[1]))) return false;
  }
  const std::string l = lower(name);
  if (l == "free" || l == "inf" || l == "infinity" || l == "end") return false;
  return std::all_of(name.begin(), name.end(), name_char);
}

void check_lp_names(const LinearModel& model)
{
  for (const auto& v : model.vars()) {
    if (!is_valid_lp_name(v.name)) throw model_error("LP name not representable: '" + v.name + "'");
  }
  for (const auto& r : model.rows()) {
    if (!is_valid_lp_name(r.name)) throw model_error("LP row name not representable: '" + r.name + "'");
  }
}

std::string export_lp(const LinearModel& model, const std::string& title)
{
  check_lp_names(model);
  std::ostringstream out;
  if (!title.empty()) out << "\\ " << title << '\n';
  out << "Minimize\n obj:";
  std::vector<Term> obj;
  for (std::size_t j = 0; j < model.num_vars(); ++j) {
    if (model.var(j).obj != 0.0) obj.push_back({j, model.var(j).obj});
  }
  if (!obj.empty()) {
    out << ' ';
    write_expression(out, model, obj);
  }
  if (model.obj_constant != 0.0) out << (model.obj_constant < 0 ? " - " : " + ") << fmt_num(std::abs(model.obj_constant));
  out << "\nSubject To\n";
  for (const auto& r : model.rows()) {
    if (!r.tag.empty()) out << "\\ tag: " << r.tag << '\n';
    out << ' ' << r.name << ": ";
    if (r.terms.empty()) {
      // LP rows need a variable; reference the first one with coefficient 0
      if (model.num_vars() == 0) throw model_error("export_lp: empty row without variables");
      out << "0 " << model.var(0).name;
    } else {
      write_expression(out, model, r.terms);
    }
    const char* sense = r.sense == RowSense::le ? " <= " : (r.sense == RowSense::ge ? " >= " : " = ");
    out << sense << fmt_num(r.rhs) << '\n';
  }
  out << "Bounds\n";
  for (const auto& v : model.vars()) {
    if (v.lb == -kInfinity && v.ub == kInfinity) out << ' ' << v.name << " free\n";
    else if (v.lb == v.ub) out << ' ' << v.name << " = " << fmt_num(v.lb) << '\n';
    else out << ' ' << bound_text(v.lb) << " <= " << v.name << " <= " << bound_text(v.ub) << '\n';
  }
  bool header = false;
  for (const auto& v : model.vars()) {
    if (v.type != VarType::integer) continue;
    if (!header) out << "General\n";
    header = true;
    out << ' ' << v.name << '\n';
  }
  header = false;
  for (const auto& v : model.vars()) {
    if (v.type != VarType::binary) continue;
    if (!header) out << "Binary\n";
    header = true;
    out << ' ' << v.name << '\n';
  }
  out << "End\n";
  return out.str();
}

namespace {

enum class TokKind { name, number, op, colon };

struct Token {
  TokKind kind;
  std::string text;
  double value = 0.0;
};

std::vector<Token> tokenize(const std::string& line)
{
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
    } else if (c == '\\') {
      break;
    } else if (c == ':') {
      out.push_back({TokKind::colon, ":"});
      ++i;
    } else if (c == '<' || c == '>' || c == '=') {
      std::string op(1, c);
      ++i;
      if (i < line.size() && (line[i] == '=' || line[i] == '<' || line[i] == '>')) op += line[i++];
      if (op == "=<") op = "<=";
      if (op == "=>") op = ">=";
      if (op == "<") op = "<=";
      if (op == ">") op = ">=";
      if (op == "==") op = "=";
      out.push_back({TokKind::op, op});
    } else if (c == '+' || c == '-') {
      out.push_back({TokKind::op, std::string(1, c)});
      ++i;
    } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t j = i;
      while (j < line.size() && (std::isdigit(static_cast<unsigned char>(line[j])) || line[j] == '.')) ++j;
      if (j < line.size() && (line[j] == 'e' || line[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < line.size() && (line[k] == '+' || line[k] == '-')) ++k;
        if (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) {
          j = k;
          while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
        }
      }
      const std::string text = line.substr(i, j - i);
      out.push_back({TokKind::number, text, std::stod(text)});
      i = j;
    } else if (name_char(c)) {
      std::size_t j = i;
      while (j < line.size() && name_char(line[j])) ++j;
      std::string text = line.substr(i, j - i);
      const std::string l = lower(text);
      if (l == "inf" || l == "infinity") out.push_back({TokKind::number, text, kInfinity});
      else out.push_back({TokKind::name, text});
      i = j;
    } else {
      throw lp_parse_error("unexpected character '" + std::string(1, c) + "' in: " + line);
    }
  }
  return out;
}

enum class Section { none, objective, constraints, bounds, general, binary, end };

std::optional<Section> section_keyword(const std::string& raw_line)
{
  std::string l = lower(raw_line);
  l.erase(0, l.find_first_not_of(" \t"));
  while (!l.empty() && std::isspace(static_cast<unsigned char>(l.back()))) l.pop_back();
  if (l == "minimize" || l == "minimise" || l == "minimum" || l == "min") return Section::objective;
  if (l == "maximize" || l == "maximise" || l == "maximum" || l == "max")
    throw lp_parse_error("maximization models are not supported");
  if (l == "subject to" || l == "such that" || l == "st" || l == "s.t." || l == "st.") return Section::constraints;
  if (l == "bounds" || l == "bound") return Section::bounds;
  if (l == "general" || l == "generals" || l == "gen" || l == "integer" || l == "integers") return Section::general;
  if (l == "binary" || l == "binaries" || l == "bin") return Section::binary;
  if (l == "end") return Section::end;
  return std::nullopt;
}

struct ParsedRow {
  std::string name;
  std::string tag;
  std::vector<std::pair<std::string, double>> terms;
  double constant = 0.0;
  RowSense sense = RowSense::le;
  double rhs = 0.0;
};

// Parses "[+|-] [number] [name]" sequences; stops at a relational operator.
std::size_t parse_expression(const std::vector<Token>& toks, std::size_t i,
                             std::vector<std::pair<std::string, double>>& terms, double& constant)
{
  while (i < toks.size()) {
    const Token& t = toks[i];
    if (t.kind == TokKind::op && (t.text == "<=" || t.text == ">=" || t.text == "=")) break;
    double sign = 1.0;
    while (i < toks.size() && toks[i].kind == TokKind::op && (toks[i].text == "+" || toks[i].text == "-")) {
      if (toks[i].text == "-") sign = -sign;
      ++i;
    }
    if (i >= toks.size()) throw lp_parse_error("dangling sign in expression");
    double coef = 1.0;
    bool has_number = false;
    if (toks[i].kind == TokKind::number) {
      coef = toks[i].value;
      has_number = true;
      ++i;
    }
    if (i < toks.size() && toks[i].kind == TokKind::name) {
      terms.emplace_back(toks[i].text, sign * coef);
      ++i;
    } else if (has_number) {
      constant += sign * coef;
    } else {
      throw lp_parse_error("malformed expression near '" + (i < toks.size() ? toks[i].text : std::string("<eol>")) + "'");
    }
  }
  return i;
}

}  // namespace

LinearModel parse_lp(const std::string& text)
{
  std::istringstream in(text);
  std::string line;
  Section section = Section::none;

  std::vector<Token> objective_tokens;
  std::vector<ParsedRow> rows;
  std::vector<Token> pending;  // tokens of the row being read
  std::string pending_tag;
  std::string next_tag;
  std::vector<std::string> bound_order;
  std::map<std::string, std::pair<double, double>> bounds;
  std::map<std::string, VarType> types;

  auto flush_row = [&](bool force) {
    // a row is complete once it holds a relational operator followed by a number
    std::size_t op_at = pending.size();
    for (std::size_t k = 0; k < pending.size(); ++k) {
      if (pending[k].kind == TokKind::op && (pending[k].text == "<=" || pending[k].text == ">=" || pending[k].text == "=")) {
        op_at = k;
        break;
      }
    }
    if (op_at == pending.size()) {
      if (force && !pending.empty()) throw lp_parse_error("constraint without relational operator");
      return;
    }
    std::size_t k = op_at + 1;
    double sign = 1.0;
    while (k < pending.size() && pending[k].kind == TokKind::op && (pending[k].text == "+" || pending[k].text == "-")) {
      if (pending[k].text == "-") sign = -sign;
      ++k;
    }
    if (k >= pending.size() || pending[k].kind != TokKind::number) {
      if (force) throw lp_parse_error("constraint without right-hand side");
      return;
    }
    ParsedRow row;
    row.tag = pending_tag;
    std::size_t start = 0;
    if (pending.size() >= 2 && pending[0].kind == TokKind::name && pending[1].kind == TokKind::colon) {
      row.name = pending[0].text;
      start = 2;
    }
    const std::vector<Token> lhs(pending.begin() + static_cast<long>(start), pending.begin() + static_cast<long>(op_at));
    parse_expression(lhs, 0, row.terms, row.constant);
    const std::string& op = pending[op_at].text;
    row.sense = op == "<=" ? RowSense::le : (op == ">=" ? RowSense::ge : RowSense::eq);
    row.rhs = sign * pending[k].value - row.constant;
    rows.push_back(std::move(row));
    pending.erase(pending.begin(), pending.begin() + static_cast<long>(k + 1));
    pending_tag.clear();
  };

  auto note_bound_var = [&](const std::string& name) {
    if (!bounds.count(name)) bound_order.push_back(name);
  };

  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos) continue;
    if (line[first] == '\\') {
      const std::string comment = line.substr(first + 1);
      const auto pos = comment.find("tag:");
      if (pos != std::string::npos) {
        std::string tag = comment.substr(pos + 4);
        tag.erase(0, tag.find_first_not_of(' '));
        next_tag = tag;
      }
      continue;
    }
    if (auto kw = section_keyword(line)) {
      if (section == Section::constraints) flush_row(true);
      section = *kw;
      if (section == Section::end) break;
      continue;
    }
    const auto toks = tokenize(line);
    switch (section) {
      case Section::none:
        throw lp_parse_error("content before the objective section");
      case Section::objective:
        objective_tokens.insert(objective_tokens.end(), toks.begin(), toks.end());
        break;
      case Section::constraints:
        if (pending.empty()) {
          pending_tag = next_tag;
          next_tag.clear();
        }
        pending.insert(pending.end(), toks.begin(), toks.end());
        flush_row(false);
        break;
      case Section::bounds: {
        // forms: l <= x <= u | x >= l | x <= u | x = v | x free | l <= x
        auto num = [&](std::size_t& k) {
          double sign = 1.0;
          while (k < toks.size() && toks[k].kind == TokKind::op && (toks[k].text == "+" || toks[k].text == "-")) {
            if (toks[k].text == "-") sign = -sign;
            ++k;
          }
          if (k >= toks.size() || toks[k].kind != TokKind::number) throw lp_parse_error("bad bound: " + line);
          return sign * toks[k++].value;
        };
        std::size_t k = 0;
        if (toks.size() == 2 && toks[0].kind == TokKind::name && lower(toks[1].text) == "free") {
          note_bound_var(toks[0].text);
          bounds[toks[0].text] = {-kInfinity, kInfinity};
          break;
        }
        if (!toks.empty() && toks[0].kind == TokKind::name) {
          const std::string name = toks[0].text;
          note_bound_var(name);
          auto [it, inserted] = bounds.try_emplace(name, 0.0, kInfinity);
          k = 1;
          if (k >= toks.size() || toks[k].kind != TokKind::op) throw lp_parse_error("bad bound: " + line);
          const std::string op = toks[k++].text;
          const double v = num(k);
          if (op == "<=") it->second.second = v;
          else if (op == ">=") it->second.first = v;
          else it->second = {v, v};
        } else {
          const double l = num(k);
          if (k >= toks.size() || toks[k].text != "<=") throw lp_parse_error("bad bound: " + line);
          ++k;
          if (k >= toks.size() || toks[k].kind != TokKind::name) throw lp_parse_error("bad bound: " + line);
          const std::string name = toks[k++].text;
          note_bound_var(name);
          auto [it, inserted] = bounds.try_emplace(name, 0.0, kInfinity);
          it->second.first = l;
          if (k < toks.size()) {
            if (toks[k].text != "<=") throw lp_parse_error("bad bound: " + line);
            ++k;
            it->second.second = num(k);
          }
        }
        break;
      }
      case Section::general:
      case Section::binary:
        for (const auto& t : toks) {
          if (t.kind != TokKind::name) throw lp_parse_error("expected variable name: " + line);
          types[t.text] = section == Section::general ? VarType::integer : VarType::binary;
        }
        break;
      case Section::end:
        break;
    }
  }
  if (!pending.empty()) flush_row(true);

  // Objective: optional "label:" then expression.
  std::vector<std::pair<std::string, double>> obj_terms;
  double obj_constant = 0.0;
  {
    std::size_t start = 0;
    if (objective_tokens.size() >= 2 && objective_tokens[0].kind == TokKind::name &&
        objective_tokens[1].kind == TokKind::colon)
      start = 2;
    else if (!objective_tokens.empty() && objective_tokens[0].kind == TokKind::colon)
      start = 1;
    const std::vector<Token> expr(objective_tokens.begin() + static_cast<long>(start), objective_tokens.end());
    if (parse_expression(expr, 0, obj_terms, obj_constant) != expr.size())
      throw lp_parse_error("relational operator in objective");
  }

  // Variable order: Bounds section first, then first appearance.
  std::vector<std::string> order = bound_order;
  std::map<std::string, bool> known;
  for (const auto& n : order) known[n] = true;
  auto see = [&](const std::string& n) {
    if (!known.count(n)) {
      known[n] = true;
      order.push_back(n);
    }
  };
  for (const auto& [n, c] : obj_terms) see(n);
  for (const auto& r : rows) {
    for (const auto& [n, c] : r.terms) see(n);
  }
  for (const auto& [n, t] : types) see(n);

  LinearModel model;
  model.obj_constant = obj_constant;
  for (const auto& name : order) {
    VarType type = VarType::continuous;
    if (auto it = types.find(name); it != types.end()) type = it->second;
    double lb = 0.0, ub = type == VarType::binary ? 1.0 : kInfinity;
    if (auto it = bounds.find(name); it != bounds.end()) {
      lb = it->second.first;
      ub = it->second.second;
    }
    model.add_var(name, lb, ub, 0.0, type);
  }
  for (const auto& [n, c] : obj_terms) model.var(*model.find_var(n)).obj += c;
  std::size_t auto_name = 0;
  for (auto& r : rows) {
    std::vector<Term> terms;
    for (const auto& [n, c] : r.terms) terms.push_back({*model.find_var(n), c});
    std::string name = r.name.empty() ? "R" + std::to_string(++auto_name) : r.name;
    model.add_row(std::move(name), r.tag, std::move(terms), r.sense, r.rhs);
  }
  return model;
}

std::string export_solution(const LinearModel& model, std::span<const double> x, double objective)
{
  std::ostringstream out;
  out << "# objective " << fmt_num(objective) << '\n';
  for (std::size_t j = 0; j < model.num_vars(); ++j) out << model.var(j).name << ' ' << fmt_num(x[j]) << '\n';
  return out.str();
}

std::vector<double> import_solution(const LinearModel& model, const std::string& text)
{
  std::vector<double> x(model.num_vars(), 0.0);
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ls(line);
    std::string name, value;
    if (!(ls >> name >> value)) throw lp_parse_error("solution line needs 'name value': " + line);
    auto j = model.find_var(name);
    if (!j) throw lp_parse_error("solution names unknown variable '" + name + "'");
    x[*j] = std::stod(value);
  }
  return x;
}

}  // namespace gtce
