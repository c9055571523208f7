"""Constants used in the library."""
from rdflib.namespace import OWL, RDF, RDFS, XSD

VERSION = "0.1.0"
SCHEMA_VERSION = 1
CONFIG_VERSION = 1

RDF_TYPE = str(RDF.type)
RDFS_SUBCLASS_OF = str(RDFS.subClassOf)
RDFS_DOMAIN = str(RDFS.domain)
RDFS_CLASS = str(RDFS.Class)
OWL_CLASS = str(OWL.Class)
OWL_THING = str(OWL.Thing)
XSD_STRING = str(XSD.string)
SCHEMA_DOMAIN_INCLUDES = "http://schema.org/domainIncludes"

WIKIDATA_SUBCLASS_OF = "http://www.wikidata.org/prop/direct/P279"
WIKIDATA_INSTANCE_OF = "http://www.wikidata.org/prop/direct/P31"

FREEBASE_NS = "http://rdf.freebase.com/ns/"
FREEBASE_TYPE_INSTANCE = FREEBASE_NS + "type.type.instance"
FREEBASE_OBJECT_TYPE = FREEBASE_NS + "type.object.type"
FREEBASE_PROPERTY_SCHEMA = FREEBASE_NS + "type.property.schema"
FREEBASE_THING = "Thing"

DEFAULT_VIRTUAL_ROOT = "urn:class-granularity:Thing"

# Printable ASCII minus the characters N-Triples forbids inside IRIs
DEFAULT_CLASS_NAME_CHARS = "".join(chr(code) for code in range(0x21, 0x7F) if chr(code) not in '<>"{}|^`\\')

DEFAULT_PRECISION = 4
PROGRESS_EVERY = 1_000_000
