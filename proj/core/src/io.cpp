#include "ctxsim/io.hpp"

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <openssl/evp.h>

#include "ctxsim/error.hpp"

namespace ctxsim {

namespace fs = std::filesystem;

std::string format_sig9(double v) {
  if (v == 0.0) return "0";  // no "-0"
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

std::string csv_field(std::string_view field) {
  if (field.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(field);
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv_row(std::ostream& out, const std::vector<std::string>& fields) {
  for (std::size_t k = 0; k < fields.size(); ++k) {
    if (k) out << ',';
    out << csv_field(fields[k]);
  }
  out << '\n';
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  bool row_has_data = false;
  for (std::size_t p = 0; p < text.size(); ++p) {
    const char c = text[p];
    if (quoted) {
      if (c == '"') {
        if (p + 1 < text.size() && text[p + 1] == '"') {
          field += '"';
          ++p;
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      row_has_data = true;
    } else if (c == ',') {
      row.push_back(std::move(field));
      field.clear();
      row_has_data = true;
    } else if (c == '\n' || c == '\r') {
      if (c == '\r' && p + 1 < text.size() && text[p + 1] == '\n') ++p;
      if (row_has_data || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
      }
      field.clear();
      row.clear();
      row_has_data = false;
    } else {
      field += c;
      row_has_data = true;
    }
  }
  require(!quoted, "CSV ends inside a quoted field");
  if (row_has_data || !field.empty()) {
    row.push_back(std::move(field));
    rows.push_back(std::move(row));
  }
  return rows;
}

void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels,
                      const DenseMatrix& values) {
  std::vector<std::string> header{"label"};
  header.insert(header.end(), labels.begin(), labels.end());
  write_csv_row(out, header);
  for (std::size_t i = 0; i < values.rows(); ++i) {
    std::vector<std::string> row{labels[i]};
    for (std::size_t j = 0; j < values.cols(); ++j) row.push_back(format_sig9(values(i, j)));
    write_csv_row(out, row);
  }
}

std::string matrix_csv(const SimilarityMatrix& m) {
  std::ostringstream out;
  write_matrix_csv(out, m.labels(), m.values());
  return out.str();
}

SimilarityMatrix parse_similarity_csv(std::string_view text, SimilarityKind kind) {
  const auto rows = parse_csv(text);
  require(!rows.empty(), "matrix CSV is empty");
  const std::size_t n = rows.front().size() - 1;
  std::vector<std::string> labels(rows.front().begin() + 1, rows.front().end());
  require(rows.size() == n + 1, "matrix CSV has " + std::to_string(rows.size() - 1) +
                                    " rows but " + std::to_string(n) + " columns");
  DenseMatrix values(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& row = rows[i + 1];
    require(row.size() == n + 1, "matrix CSV row " + std::to_string(i + 1) + " is ragged");
    require(row.front() == labels[i], "matrix CSV row label '" + row.front() +
                                          "' does not match column label '" + labels[i] + "'");
    for (std::size_t j = 0; j < n; ++j) {
      const auto& cell = row[j + 1];
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(cell.c_str(), &end);
      require(!cell.empty() && end == cell.c_str() + cell.size() && errno == 0,
              "matrix CSV cell (" + std::to_string(i + 1) + ", " + std::to_string(j + 1) +
                  ") is not a number: '" + cell + "'");
      values(i, j) = v;
    }
  }
  return SimilarityMatrix(std::move(labels), std::move(values), kind);
}

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  require(EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) == 1,
          "SHA-256 digest failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int k = 0; k < length; ++k) {
    out += kHex[digest[k] >> 4];
    out += kHex[digest[k] & 0x0F];
  }
  return out;
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

void write_text_file(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw DataError("cannot write file: " + path.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw DataError("cannot write file: " + path.string());
  }
  fs::rename(tmp, path);
}

}  // namespace ctxsim
