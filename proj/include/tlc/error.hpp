#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace tlc {

// Every failure the library reports derives from Error; the CLI maps the
// concrete classes onto stable exit codes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t position, const std::string& what)
        : Error("parse error at " + std::to_string(position) + ": " + what), position_(position) {}

    std::size_t position() const { return position_; }

private:
    std::size_t position_;
};

class IllTyped : public Error {
public:
    explicit IllTyped(const std::string& what) : Error("ill-typed: " + what) {}
};

class UnboundVariable : public Error {
public:
    explicit UnboundVariable(const std::string& name)
        : Error("unbound variable: " + name), name_(name) {}

    const std::string& name() const { return name_; }

private:
    std::string name_;
};

class TypeMismatch : public Error {
public:
    explicit TypeMismatch(const std::string& what) : Error("type mismatch: " + what) {}
};

class ResourceExhausted : public Error {
public:
    explicit ResourceExhausted(const std::string& what) : Error("resource exhausted: " + what) {}
};

class Overflow : public Error {
public:
    explicit Overflow(const std::string& what) : Error("overflow: " + what) {}
};

class SideConditionViolated : public Error {
public:
    explicit SideConditionViolated(const std::string& what)
        : Error("side condition violated: " + what) {}
};

class LevelTooSmall : public Error {
public:
    explicit LevelTooSmall(const std::string& what) : Error("level too small: " + what) {}
};

class IndexOutOfRange : public Error {
public:
    explicit IndexOutOfRange(const std::string& what) : Error("index out of range: " + what) {}
};

class EqualTerms : public Error {
public:
    EqualTerms() : Error("terms are provably equal") {}
};

class NotSeparable : public Error {
public:
    explicit NotSeparable(unsigned max_base)
        : Error("no distinguishing model with base <= " + std::to_string(max_base)),
          max_base_(max_base) {}
    NotSeparable(unsigned max_base, const std::string& what)
        : Error(what + " (base <= " + std::to_string(max_base) + ")"), max_base_(max_base) {}

    unsigned max_base() const { return max_base_; }

private:
    unsigned max_base_;
};

class IllFormed : public Error {
public:
    explicit IllFormed(const std::string& what) : Error("ill-formed arrow: " + what) {}
};

class EqualArrows : public Error {
public:
    EqualArrows() : Error("arrows are equal in CCC") {}
};

class SchemaError : public Error {
public:
    explicit SchemaError(const std::string& what) : Error("certificate schema: " + what) {}
};

}  // namespace tlc
