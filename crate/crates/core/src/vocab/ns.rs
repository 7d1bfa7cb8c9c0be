//! Compact IRIs used across the crawler. Prefix expansion is left to the
//! consumer; the store treats these as opaque identifiers.

pub const RDF_TYPE: &str = "rdf:type";
pub const RDFS_LABEL: &str = "rdfs:label";
pub const OWL_SAME_AS: &str = "owl:sameAs";

pub const XSD_STRING: &str = "xsd:string";
pub const XSD_DECIMAL: &str = "xsd:decimal";
pub const XSD_INTEGER: &str = "xsd:integer";
pub const XSD_BOOLEAN: &str = "xsd:boolean";
pub const XSD_DATETIME: &str = "xsd:dateTime";

pub const SOSA_OBSERVED_PROPERTY: &str = "sosa:observedProperty";
pub const SOSA_HAS_FEATURE_OF_INTEREST: &str = "sosa:hasFeatureOfInterest";
pub const SOSA_FEATURE_OF_INTEREST: &str = "sosa:FeatureOfInterest";
pub const SOSA_RESULT_TIME: &str = "sosa:resultTime";
pub const SOSA_HAS_RESULT: &str = "sosa:hasResult";

pub const IOT_STREAM: &str = "iot-stream:IotStream";
pub const IOT_GENERATED_BY: &str = "iot-stream:generatedBy";
pub const IOT_BELONGS_TO: &str = "iot-stream:belongsTo";

pub const QUDT_QUANTITY_VALUE: &str = "qudt:QuantityValue";
pub const QUDT_NUMERIC_VALUE: &str = "qudt:numericValue";
pub const QUDT_UNIT: &str = "qudt:unit";

pub const QK_POWER: &str = "qk:Power";
pub const QK_ENERGY: &str = "qk:Energy";

pub const DEVICES_ROOT: &str = "devices:Device";
pub const DEVICES_GATEWAY: &str = "devices:Gateway";

// Crawler-specific vocabulary.
pub const SHC_HAS_TIMESTAMP: &str = "shc:hasTimeStamp";
pub const SHC_HAS_NETWORK_NAME: &str = "shc:hasNetworkName";
pub const SHC_HAS_IP_ADDRESS: &str = "shc:hasIpAddress";
pub const SHC_MANUFACTURER: &str = "shc:manufacturer";
pub const SHC_LOCATION_URL: &str = "shc:locationUrl";
pub const SHC_SERVICE_TYPE: &str = "shc:serviceType";
pub const SHC_SERVICE_PORT: &str = "shc:servicePort";
pub const SHC_DISCOVERY_SOURCE: &str = "shc:discoverySource";
pub const SHC_DISCOVERY_OBSERVATION: &str = "shc:DiscoveryObservation";
pub const SHC_DISCOVERY_RESULT: &str = "shc:DiscoveryResult";
pub const SHC_DISCOVERED_DEVICE: &str = "shc:discoveredDevice";
pub const SHC_OBSERVED_DEVICE: &str = "shc:observedDevice";
pub const SHC_NODE_ID: &str = "shc:nodeId";
pub const SHC_CONNECTED_VIA: &str = "shc:connectedVia";
pub const SHC_LOCATED_IN: &str = "shc:locatedIn";
pub const SHC_ATTRIBUTE_ID: &str = "shc:attributeId";
pub const SHC_ATTRIBUTE_TYPE: &str = "shc:attributeType";
pub const SHC_LINK_STATUS: &str = "shc:linkStatus";
pub const SHC_LINK_CANDIDATE: &str = "shc:linkCandidate";
pub const SHC_CANDIDATE_CLASS: &str = "shc:candidateClass";
pub const SHC_CANDIDATE_SCORE: &str = "shc:candidateScore";
pub const SHC_CANDIDATE_RANK: &str = "shc:candidateRank";
pub const SHC_APPLIANCE_DETECTION: &str = "shc:applianceDetection";

pub const SOSA_OBSERVATION: &str = "sosa:Observation";
pub const SOSA_RESULT: &str = "sosa:Result";
pub const SHC_ELECTRIC_POWER_OBSERVATION: &str = "shc:ElectricPowerObservation";
pub const SHC_ELECTRIC_POWER_RESULT: &str = "shc:ElectricPowerResult";
pub const SHC_ELECTRIC_ENERGY_OBSERVATION: &str = "shc:ElectricEnergyObservation";
pub const SHC_ELECTRIC_ENERGY_RESULT: &str = "shc:ElectricEnergyResult";
pub const SHC_LINK_CANDIDATE_CLASS: &str = "shc:LinkCandidate";
