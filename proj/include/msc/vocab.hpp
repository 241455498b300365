#pragma once

#include <string>
#include <string_view>

namespace msc::vocab {

inline constexpr std::string_view kRdf = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline constexpr std::string_view kRdfs = "http://www.w3.org/2000/01/rdf-schema#";
inline constexpr std::string_view kXsd = "http://www.w3.org/2001/XMLSchema#";
inline constexpr std::string_view kSkos = "http://www.w3.org/2004/02/skos/core#";
inline constexpr std::string_view kDct = "http://purl.org/dc/terms/";

inline constexpr std::string_view kDefaultBase = "http://msc2010.org/resources/MSC/2010/";

inline std::string rdf(std::string_view local) { return std::string(kRdf).append(local); }
inline std::string rdfs(std::string_view local) { return std::string(kRdfs).append(local); }
inline std::string xsd(std::string_view local) { return std::string(kXsd).append(local); }
inline std::string skos(std::string_view local) { return std::string(kSkos).append(local); }
inline std::string dct(std::string_view local) { return std::string(kDct).append(local); }

inline const std::string kType = rdf("type");
inline const std::string kXmlLiteral = rdf("XMLLiteral");
inline const std::string kXsdInteger = xsd("integer");

}  // namespace msc::vocab
