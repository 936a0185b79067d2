#pragma once

// The .dcat workspace format: parser, validation hook and canonical serializer.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "dcat/error.hpp"
#include "dcat/fincat.hpp"
#include "dcat/prof.hpp"

namespace dcat::dsl {

struct Location {
  std::size_t line = 1;
  std::size_t column = 1;
};

std::string to_string(const Location& at);

/// A parse failure with a source location.
class ParseError : public Error {
 public:
  ParseError(Location at, const std::string& message);
  const Location& location() const { return at_; }
  /// The message without the location prefix.
  const std::string& detail() const { return detail_; }

 private:
  Location at_;
  std::string detail_;
};

/// Malformed text; the message lists the expected tokens.
class SyntaxError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A reference to an unknown name, or a duplicate definition.
class ResolutionError : public ParseError {
 public:
  using ParseError::ParseError;
};

/// A declaration that parsed and resolved but fails its laws.
class WorkspaceValidationError : public ValidationError {
 public:
  WorkspaceValidationError(Location at, const std::string& message);
  const Location& location() const { return at_; }

 private:
  Location at_;
};

struct CategoryEntry {
  std::string name;
  CatPtr value;
  Location at;
};

struct FunctorEntry {
  std::string name;
  std::string source;
  std::string target;
  Functor value;
  Location at;
};

struct ProfunctorEntry {
  std::string name;
  std::string source;
  std::string target;
  ProfPtr value;
  Location at;
};

struct CellEntry {
  std::string name;
  std::string source;
  std::string target;
  std::string left;
  std::string right;
  Cell value;
  Location at;
};

/// Declarations in source order, one list per kind.
struct Workspace {
  std::vector<CategoryEntry> categories;
  std::vector<FunctorEntry> functors;
  std::vector<ProfunctorEntry> profunctors;
  std::vector<CellEntry> cells;

  const CategoryEntry* find_category(std::string_view name) const;
  const FunctorEntry* find_functor(std::string_view name) const;
  const ProfunctorEntry* find_profunctor(std::string_view name) const;
  const CellEntry* find_cell(std::string_view name) const;

  /// Names, references and structure; locations are ignored.
  friend bool operator==(const Workspace& x, const Workspace& y);
};

/// Parses and validates. Throws SyntaxError, ResolutionError or
/// WorkspaceValidationError.
Workspace parse(std::string_view text);
Workspace parse_file(const std::string& path);

/// Canonical text: kinds in the order categories, functors, profunctors,
/// cells; entries in declaration order; names quoted only when needed.
std::string serialize(const Workspace& w);

/// Whether `name` can be written without quotes.
bool is_bare_identifier(std::string_view name);
std::string quote_if_needed(std::string_view name);

}  // namespace dcat::dsl
