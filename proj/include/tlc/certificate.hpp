#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "tlc/ccc.hpp"
#include "tlc/products.hpp"
#include "tlc/separator.hpp"

namespace tlc {

inline constexpr const char* kCertificateSchema = "tlc-certificate";
inline constexpr int kCertificateVersion = 1;

enum class CertificateKind { LambdaSeparation, ProductSeparation, CccCollapse };

std::string kind_name(CertificateKind kind);  // lambda-separation, product-separation, ccc-collapse
CertificateKind parse_kind(const std::string& name);

/// Rule applications taking the iso source to its product normal form.
using RuleTrace = std::vector<std::pair<TypePath, TypeRule>>;

struct CertificateEnvelope {
    int version = kCertificateVersion;
    CertificateKind kind = CertificateKind::LambdaSeparation;
    std::variant<SeparationCertificate, ProductCertificate, CollapseCertificate> payload;
    /// Product certificates only; filled from type_nf when wrapping.
    RuleTrace trace;
    std::map<std::string, std::string> toolchain;
};

CertificateEnvelope wrap(SeparationCertificate cert);
CertificateEnvelope wrap(ProductCertificate cert);
CertificateEnvelope wrap(CollapseCertificate cert);

/// Pretty-printed JSON; parse_certificate(serialize(e)) serializes to the same text.
std::string serialize(const CertificateEnvelope& envelope);
/// Throws SchemaError for malformed JSON, unknown kinds, wrong versions and
/// embedded terms, types or arrows that do not parse or typecheck.
CertificateEnvelope parse_certificate(std::string_view json_text);

/// Replays the payload; product certificates also replay the rule trace.
bool verify(const CertificateEnvelope& envelope);

}  // namespace tlc
