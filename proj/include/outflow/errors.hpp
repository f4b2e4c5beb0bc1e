#pragma once

#include <stdexcept>
#include <string>

namespace outflow {

// Exit-code class of an error: config=1, domain=2, blowup=3.
enum class ErrorClass { config = 1, domain = 2, blowup = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorClass cls, std::string kind, const std::string& msg)
        : std::runtime_error(msg), cls_(cls), kind_(std::move(kind)) {}
    ErrorClass error_class() const { return cls_; }
    const std::string& kind() const { return kind_; }

private:
    ErrorClass cls_;
    std::string kind_;
};

class ConfigError : public Error {
public:
    ConfigError(std::string kind, const std::string& msg)
        : Error(ErrorClass::config, std::move(kind), msg) {}
};

class DomainError : public Error {
public:
    DomainError(std::string kind, const std::string& msg)
        : Error(ErrorClass::domain, std::move(kind), msg) {}
};

}  // namespace outflow
