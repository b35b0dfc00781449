#include <cctype>
#include <charconv>
#include <map>
#include <optional>

#include "desgrid/error.hpp"
#include "desgrid/grid/case.hpp"

namespace desgrid::grid {

namespace {

struct Matrix {
  std::vector<std::vector<double>> rows;
  std::vector<std::size_t> lines;
};

// Splits the file into "mpc.<field> = <value>;" assignments. Matrices are
// parsed numerically; cell arrays and strings are skipped.
class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  void run() {
    while (skip_space_and_comments(), pos_ < text_.size()) {
      std::size_t start_line = line_;
      std::string word = identifier();
      if (word.empty()) {
        skip_statement();
        continue;
      }
      if (word == "function") {
        skip_line();
        continue;
      }
      if (word.rfind("mpc.", 0) != 0) {
        skip_statement();
        continue;
      }
      std::string field = word.substr(4);
      skip_inline_space();
      if (peek() != '=') throw ParseError("expected '=' after " + word, line_);
      ++pos_;
      skip_space_and_comments();
      char c = peek();
      if (c == '[') {
        ++pos_;
        matrices_[field] = matrix(start_line);
      } else if (c == '{') {
        skip_until('}');
        skip_statement();
      } else if (c == '\'' || c == '"') {
        skip_statement();
      } else {
        scalars_[field] = number();
        skip_statement();
      }
    }
  }

  std::map<std::string, Matrix> matrices_;
  std::map<std::string, double> scalars_;

 private:
  char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

  void advance() {
    if (text_[pos_] == '\n') ++line_;
    ++pos_;
  }

  void skip_line() {
    while (pos_ < text_.size() && text_[pos_] != '\n') ++pos_;
  }

  void skip_inline_space() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t')) ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '%') {
        skip_line();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void skip_until(char end) {
    while (pos_ < text_.size() && text_[pos_] != end) {
      if (text_[pos_] == '%') {
        skip_line();
        continue;
      }
      advance();
    }
    if (pos_ < text_.size()) ++pos_;
  }

  void skip_statement() {
    while (pos_ < text_.size() && text_[pos_] != ';' && text_[pos_] != '\n') ++pos_;
    if (pos_ < text_.size() && text_[pos_] == ';') ++pos_;
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.') {
        ++pos_;
      } else {
        break;
      }
    }
    return std::string(text_.substr(start, pos_ - start));
  }

  double number() {
    std::size_t start = pos_;
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '.' || c == '-' || c == '+') {
        ++pos_;
      } else {
        break;
      }
    }
    std::string_view tok = text_.substr(start, pos_ - start);
    if (tok == "Inf" || tok == "inf") return 1e300;
    if (tok == "-Inf" || tok == "-inf") return -1e300;
    double v = 0;
    const char* first = tok.data();
    if (!tok.empty() && tok.front() == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
      throw ParseError("invalid number '" + std::string(tok) + "'", line_);
    return v;
  }

  Matrix matrix(std::size_t) {
    Matrix m;
    std::vector<double> row;
    std::size_t row_line = line_;
    auto flush = [&] {
      if (!row.empty()) {
        m.rows.push_back(std::move(row));
        m.lines.push_back(row_line);
        row.clear();
      }
    };
    while (true) {
      if (pos_ >= text_.size()) throw ParseError("unterminated matrix", line_);
      char c = text_[pos_];
      if (c == ']') {
        ++pos_;
        flush();
        skip_statement();
        return m;
      }
      if (c == '%') {
        skip_line();
      } else if (c == ';' || c == '\n') {
        flush();
        advance();
        row_line = line_;
      } else if (c == ' ' || c == '\t' || c == ',' || c == '\r') {
        ++pos_;
      } else {
        if (row.empty()) row_line = line_;
        row.push_back(number());
      }
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
};

const Matrix& require(const Reader& r, const std::string& name, std::size_t min_cols) {
  auto it = r.matrices_.find(name);
  if (it == r.matrices_.end()) throw Error("missing required matrix mpc." + name);
  for (std::size_t i = 0; i < it->second.rows.size(); ++i)
    if (it->second.rows[i].size() < min_cols)
      throw ParseError("mpc." + name + " row has " + std::to_string(it->second.rows[i].size()) +
                           " columns, need " + std::to_string(min_cols),
                       it->second.lines[i]);
  return it->second;
}

}  // namespace

GridCase parse_case(std::string_view text, std::string name) {
  Reader r(text);
  r.run();
  GridCase c;
  c.name = std::move(name);
  auto base = r.scalars_.find("baseMVA");
  if (base == r.scalars_.end()) throw Error("missing required scalar mpc.baseMVA");
  c.base_mva = base->second;

  for (const auto& row : require(r, "bus", 3).rows)
    c.buses.push_back({static_cast<int>(row[0]), row[2]});
  for (const auto& row : require(r, "gen", 10).rows) {
    Generator g;
    g.bus = static_cast<int>(row[0]);
    g.p_mw = row[1];
    g.in_service = row[7] > 0;
    g.p_max = row[8];
    g.p_min = row[9];
    c.gens.push_back(g);
  }
  const Matrix& br = require(r, "branch", 11);
  for (std::size_t i = 0; i < br.rows.size(); ++i) {
    const auto& row = br.rows[i];
    Branch b;
    b.from = static_cast<int>(row[0]);
    b.to = static_cast<int>(row[1]);
    b.reactance = row[3];
    b.rating_mw = row[5];
    b.in_service = row[10] > 0;
    c.branches.push_back(b);
  }
  try {
    c.finalize();
  } catch (const Error& e) {
    throw Error(std::string("dangling reference: ") + e.what());
  }
  return c;
}

}  // namespace desgrid::grid
