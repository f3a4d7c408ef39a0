#pragma once
// Fixed vocabulary: the three engine namespaces plus the well-known RDF ones.

#include <string>

namespace satis::vocab {

inline const std::string kRdfNs = "http://www.w3.org/1999/02/22-rdf-syntax-ns#";
inline const std::string kRdfsNs = "http://www.w3.org/2000/01/rdf-schema#";
inline const std::string kMapNs = "http://satis.example.org/map#";
inline const std::string kProcessNs = "http://satis.example.org/process#";
inline const std::string kServiceNs = "http://satis.example.org/service#";

inline const std::string kRdfType = kRdfNs + "type";
inline const std::string kRdfsSubClassOf = kRdfsNs + "subClassOf";
inline const std::string kRdfsLabel = kRdfsNs + "label";

inline const std::string kHasSource = kMapNs + "hasSource";
inline const std::string kHasTarget = kMapNs + "hasTarget";
inline const std::string kHasStrategy = kMapNs + "hasStrategy";
inline const std::string kHasVerb = kMapNs + "hasVerb";
inline const std::string kHasObject = kMapNs + "hasObject";
inline const std::string kHasParameter = kMapNs + "hasParameter";
inline const std::string kHasResource = kMapNs + "hasResource";
inline const std::string kAnyVerb = kMapNs + "AnyVerb";
inline const std::string kAnyObject = kMapNs + "AnyObject";
inline const std::string kAnyParameter = kMapNs + "AnyParameter";

inline const std::string kHasInput = kProcessNs + "hasInput";
inline const std::string kHasOutput = kProcessNs + "hasOutput";
inline const std::string kGrounding = kServiceNs + "grounding";

}  // namespace satis::vocab
