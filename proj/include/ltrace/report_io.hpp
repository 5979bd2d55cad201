#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "ltrace/certificate.hpp"
#include "ltrace/classify.hpp"

namespace ltrace {

inline constexpr const char* kClassificationSchema = "ltrace.classification/1";
inline constexpr const char* kCertificateSchema = "ltrace.certificate/1";

/// Report document:
///   schema, tool_version, operator {name, n, k, dimV, dimW},
///   elliptic {verdict, margin, scale, witness, witness_sigma, samples, tol},
///   cancelling {verdict, residual_dim, witness_w, witness_distance, samples,
///               non_elliptic_input, tol},
///   strongly_cancelling {verdict, plane_e1, plane_e2, witness_w,
///                        witness_distance, planes_checked, note},
///   c_elliptic {verdict, certificate_degree, d_max, eta, nu,
///               kernel [[re, im], ...], residual, min_sigma, starts, source},
///   certificate (same layout as a certificate file, or null),
///   config {...}, notes [...]
nlohmann::json report_to_json(const ClassificationReport& r);
std::string report_to_text(const ClassificationReport& r);

/// Certificate document: schema, n, k, d, dimV, dimW and one block per alpha:
///   {"alpha": [...], "entries": [[{"monomials": [[beta..., "p/q"], ...]}]]}
/// Rationals are stored as exact "p/q" strings.
nlohmann::json certificate_to_json(const Certificate& c);
Certificate certificate_from_json(const nlohmann::json& doc);
std::string certificate_to_text(const Certificate& c);
Certificate parse_certificate(std::string_view text);
void write_certificate_file(const Certificate& c, const std::filesystem::path& path);
Certificate read_certificate_file(const std::filesystem::path& path);

/// Writes text to path; refuses to overwrite an existing file.
void write_new_file(const std::filesystem::path& path, std::string_view text);

}  // namespace ltrace
