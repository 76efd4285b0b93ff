#pragma once

#include <stdexcept>
#include <string>

namespace clwe {

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define CLWE_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                     \
   public:                                                        \
    explicit Name(const std::string& what) : Error(#Name ": " + what) {} \
  }

CLWE_DEFINE_ERROR(EmptyCorpus);
CLWE_DEFINE_ERROR(EmptyVocabulary);
CLWE_DEFINE_ERROR(LanguageMismatch);
CLWE_DEFINE_ERROR(InvalidSpec);
CLWE_DEFINE_ERROR(DimensionMismatch);
CLWE_DEFINE_ERROR(ZeroVector);
CLWE_DEFINE_ERROR(DegenerateVocabulary);
CLWE_DEFINE_ERROR(CutoffTooLarge);
CLWE_DEFINE_ERROR(RankDeficient);
CLWE_DEFINE_ERROR(EmptyDictionary);
CLWE_DEFINE_ERROR(KTooLarge);
CLWE_DEFINE_ERROR(InvalidK);
CLWE_DEFINE_ERROR(SolverError);
CLWE_DEFINE_ERROR(EmptyTestSet);
CLWE_DEFINE_ERROR(AllQueriesOov);
CLWE_DEFINE_ERROR(InsufficientCoverage);
CLWE_DEFINE_ERROR(EmptyParallel);
CLWE_DEFINE_ERROR(LengthMismatch);
CLWE_DEFINE_ERROR(NoSmoothingZeroProb);
CLWE_DEFINE_ERROR(InvalidConfig);
CLWE_DEFINE_ERROR(StageFailure);
CLWE_DEFINE_ERROR(IoError);

#undef CLWE_DEFINE_ERROR

// Carries the 1-based line number of the offending input line.
class ParseError : public Error {
 public:
  ParseError(const std::string& what, size_t line)
      : Error("ParseError at line " + std::to_string(line) + ": " + what),
        line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

}  // namespace clwe
