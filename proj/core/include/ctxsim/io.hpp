#pragma once

#include <filesystem>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ctxsim/matrix.hpp"
#include "ctxsim/similarity.hpp"

namespace ctxsim {

// Nine significant digits, the precision used in every CSV artifact.
std::string format_sig9(double v);

// RFC 4180 field quoting: fields containing a comma, quote or newline are
// wrapped in double quotes with inner quotes doubled.
std::string csv_field(std::string_view field);
void write_csv_row(std::ostream& out, const std::vector<std::string>& fields);
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

// Labels as first row and column; top-left cell is "label".
void write_matrix_csv(std::ostream& out, const std::vector<std::string>& labels,
                      const DenseMatrix& values);
std::string matrix_csv(const SimilarityMatrix& m);
// Throws DataError on ragged rows, mismatched row/column labels,
// non-numeric cells or asymmetry above 1e-12.
SimilarityMatrix parse_similarity_csv(std::string_view text,
                                      SimilarityKind kind = SimilarityKind::normalized);

std::string sha256_hex(std::string_view data);

std::string read_text_file(const std::filesystem::path& path);
// Writes via a sibling temporary file and rename, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view content);

}  // namespace ctxsim
