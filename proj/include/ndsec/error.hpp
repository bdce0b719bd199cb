#pragma once
#ifndef NDSEC_ERROR_HPP
#define NDSEC_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ndsec {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid cryptographic or protocol parameter (bad group, exponent out of range).
class ParameterError : public Error {
public:
    using Error::Error;
};

/// Peer public value in the degenerate set {0, 1, p-1} or outside [0, p).
class SubgroupError : public Error {
public:
    using Error::Error;
};

enum class CodecErrc {
    malformed,    // truncated, trailing bytes, bad option, non-zero reserved
    unsupported,  // unknown type or code
    checksum,     // pseudo-header checksum mismatch
    too_large,    // public value does not fit the 16-bit length field
};

inline std::string_view to_string(CodecErrc e)
{
    switch (e) {
    case CodecErrc::malformed: return "malformed";
    case CodecErrc::unsupported: return "unsupported";
    case CodecErrc::checksum: return "checksum";
    case CodecErrc::too_large: return "too_large";
    }
    return "unknown";
}

class CodecError : public Error {
public:
    CodecError(CodecErrc code, const std::string& what)
        : Error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }
    CodecErrc code() const noexcept { return code_; }

private:
    CodecErrc code_;
};

enum class ProtocolErrc {
    wrong_mode,          // operation needs hashed mode (or vice versa)
    missing_key,         // hashed resolution without a pairwise key
    protocol_order,      // KexResp with no exchange in flight
    degenerate_public,   // peer sent 0, 1 or p-1
    already_pending,     // resolution for the target already in flight
    self_target,         // resolving our own address
};

inline std::string_view to_string(ProtocolErrc e)
{
    switch (e) {
    case ProtocolErrc::wrong_mode: return "wrong_mode";
    case ProtocolErrc::missing_key: return "missing_key";
    case ProtocolErrc::protocol_order: return "protocol_order";
    case ProtocolErrc::degenerate_public: return "degenerate_public";
    case ProtocolErrc::already_pending: return "already_pending";
    case ProtocolErrc::self_target: return "self_target";
    }
    return "unknown";
}

class ProtocolError : public Error {
public:
    ProtocolError(ProtocolErrc code, const std::string& what)
        : Error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }
    ProtocolErrc code() const noexcept { return code_; }

private:
    ProtocolErrc code_;
};

/// Simulator or scenario misconfiguration. Carries one diagnostic per bad field.
class ConfigError : public Error {
public:
    explicit ConfigError(std::vector<std::string> diagnostics)
        : Error(join(diagnostics)), diagnostics_(std::move(diagnostics))
    {
    }
    const std::vector<std::string>& diagnostics() const noexcept { return diagnostics_; }

private:
    static std::string join(const std::vector<std::string>& d)
    {
        std::string out = "invalid configuration";
        for (const auto& s : d) {
            out += "; ";
            out += s;
        }
        return out;
    }
    std::vector<std::string> diagnostics_;
};

class IoError : public Error {
public:
    using Error::Error;
};

}  // namespace ndsec

#endif  // NDSEC_ERROR_HPP
