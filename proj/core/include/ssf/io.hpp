// SPDX-License-Identifier: Apache-2.0
#pragma once

#include "ssf/eof.hpp"
#include "ssf/errors.hpp"
#include "ssf/experiment_config.hpp"
#include "ssf/fourier_eof.hpp"
#include "ssf/ksvd.hpp"
#include "ssf/tensor.hpp"
#include "ssf/tucker.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <variant>

namespace ssf {

/// DT01 tensor container: magic "DT01", u32 little-endian order P, P u64
/// little-endian dims, then raw IEEE-754 doubles (little-endian) in the
/// mode-1-fastest linearization. Round trips are bit-exact.
void write_tensor(std::ostream& os, const DenseTensor& t);
void write_tensor(const std::filesystem::path& path, const DenseTensor& t);
DenseTensor read_tensor(std::istream& is);
DenseTensor read_tensor(const std::filesystem::path& path);

/// Any serializable basis. K-SVD bases travel with their centering vector.
using AnyBasis = std::variant<EofBasis, FourierEofBasis, KsvdBasis, TuckerBasis>;

[[nodiscard]] std::string basis_kind_name(const AnyBasis& b);

/// BS01 basis container: magic "BS01", u32 type tag (1 EOF, 2 Fourier+EOF,
/// 3 K-SVD, 4 Tucker), then the type's hyper-parameters and factor blocks,
/// each stored as an embedded DT01 tensor (complex matrices as separate
/// real and imaginary planes). Round trips are bit-exact.
void write_basis(const std::filesystem::path& path, const AnyBasis& b);
AnyBasis read_basis(const std::filesystem::path& path);

/// Reads a basis and requires it to hold the given alternative; a file with
/// a different type tag raises ParseError(Kind::TypeTag).
template <typename BasisT>
BasisT read_basis_as(const std::filesystem::path& path) {
    AnyBasis any = read_basis(path);
    if (auto* p = std::get_if<BasisT>(&any)) {
        return std::move(*p);
    }
    throw ParseError(ParseError::Kind::TypeTag,
                     path.string() + ": basis type tag mismatch (found " + basis_kind_name(any) +
                         ")");
}

/// Parses a JSON experiment configuration. Missing required keys and invalid
/// values raise ConfigError naming the offending field; unknown keys are
/// reported as warnings on stderr and ignored.
ExperimentConfig read_config(const std::filesystem::path& path);
ExperimentConfig parse_config(const std::string& json_text, const std::string& origin = "config");

/// Canonical JSON rendering of a config and a stable 64-bit FNV-1a hash of
/// it; the hash is recorded next to every report.
std::string config_to_json(const ExperimentConfig& config);
std::uint64_t config_hash(const ExperimentConfig& config);

}  // namespace ssf
