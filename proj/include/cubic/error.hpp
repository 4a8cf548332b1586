#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace cubic {

enum class ErrorKind {
    SingularPoint,
    DegenerateChart,
    NoConsistentLift,
    DegenerateLevel,
    CertificateDisabled,
    FrontierOverflow,
    CenterOffSurface,
    NoSamplesFound,
    InvalidArgument,
    Parse,
};

inline std::string_view to_string(ErrorKind k)
{
    switch (k) {
    case ErrorKind::SingularPoint: return "SingularPoint";
    case ErrorKind::DegenerateChart: return "DegenerateChart";
    case ErrorKind::NoConsistentLift: return "NoConsistentLift";
    case ErrorKind::DegenerateLevel: return "DegenerateLevel";
    case ErrorKind::CertificateDisabled: return "CertificateDisabled";
    case ErrorKind::FrontierOverflow: return "FrontierOverflow";
    case ErrorKind::CenterOffSurface: return "CenterOffSurface";
    case ErrorKind::NoSamplesFound: return "NoSamplesFound";
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::Parse: return "Parse";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind)
    {
    }

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

} // namespace cubic
