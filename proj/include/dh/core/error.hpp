#pragma once

#include <stdexcept>
#include <string>

namespace dh {

// Base for all recoverable parse/format errors raised by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class ZipError : public Error {
public:
    using Error::Error;
};

class XmlError : public Error {
public:
    using Error::Error;
};

class PngError : public Error {
public:
    using Error::Error;
};

class CfbError : public Error {
public:
    using Error::Error;
};

class PdfError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

}  // namespace dh
