#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace dualgroup {

// A file could not be read or decoded. Carries the offending file and, where
// known, the byte offset or line number.
class ParseError : public std::runtime_error {
public:
    ParseError(std::string file, long long offset, const std::string& reason)
        : std::runtime_error(file + (offset >= 0 ? " @" + std::to_string(offset) : "") +
                             ": " + reason),
          file_(std::move(file)),
          offset_(offset) {}

    const std::string& file() const { return file_; }
    long long offset() const { return offset_; }

private:
    std::string file_;
    long long offset_;
};

// Loaded data violates a documented invariant. Collects every violation so a
// bad dataset is reported in one pass.
class ValidationError : public std::runtime_error {
public:
    explicit ValidationError(std::vector<std::string> violations)
        : std::runtime_error(join(violations)), violations_(std::move(violations)) {}

    explicit ValidationError(const std::string& single)
        : ValidationError(std::vector<std::string>{single}) {}

    const std::vector<std::string>& violations() const { return violations_; }

private:
    static std::string join(const std::vector<std::string>& v) {
        std::string out;
        for (size_t i = 0; i < v.size(); ++i) {
            if (i) out += "; ";
            out += v[i];
        }
        return out.empty() ? "invariant violation" : out;
    }

    std::vector<std::string> violations_;
};

// A pipeline stage failed; the stage name is prefixed to the message.
class PipelineError : public std::runtime_error {
public:
    PipelineError(const std::string& stage, const std::string& what)
        : std::runtime_error("stage " + stage + ": " + what), stage_(stage) {}

    const std::string& stage() const { return stage_; }

private:
    std::string stage_;
};

}  // namespace dualgroup
