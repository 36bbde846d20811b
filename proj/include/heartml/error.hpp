#pragma once

#include <stdexcept>
#include <string>

namespace heartml {

/// Pipeline stage an error originated from; reported in CLI diagnostics.
enum class Stage { Data, Preprocess, Model, Tuning, Evaluation, Io, Config };

/// Validation errors exit with code 1, I/O and configuration errors with 2.
enum class ErrorKind { Validation, Io, Config };

const char* stage_name(Stage stage);

class Error : public std::runtime_error {
public:
    Error(Stage stage, ErrorKind kind, const std::string& message)
        : std::runtime_error(message), stage_(stage), kind_(kind) {}

    Stage stage() const { return stage_; }
    ErrorKind kind() const { return kind_; }
    int exit_code() const { return kind_ == ErrorKind::Validation ? 1 : 2; }

private:
    Stage stage_;
    ErrorKind kind_;
};

}  // namespace heartml
