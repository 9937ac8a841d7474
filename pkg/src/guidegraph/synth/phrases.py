"""Phrase pools for synthetic guideline pages, keyed by node class.

The pools feed both the page generator (node text with a known class) and
the standalone classification fixture, so generated documents double as
classifier training data.
"""

PHRASE_POOLS = {
    "Evaluation": (
        "Pathology review",
        "Pulmonary function testing",
        "Brain imaging if symptomatic",
        "Mediastinal lymph node evaluation",
        "Bronchoscopy with biopsy",
        "Percutaneous needle biopsy",
        "Complete blood count and chemistry panel",
        "Molecular profiling of tumor specimen",
        "PD-L1 expression testing",
        "Smoking history assessment",
        "Bone scan when indicated",
        "Endobronchial ultrasound staging",
        "Baseline pulmonary evaluation",
        "Diagnostic thoracentesis",
    ),
    "Result": (
        "Stable",
        "Progression",
        "Partial response",
        "Complete response",
        "No evidence of disease",
        "Residual disease present",
        "Negative margins",
        "Positive margins",
        "Locoregional recurrence",
        "Distant metastases identified",
        "Benign findings",
        "Indeterminate nodule",
        "Worsening on serial imaging",
        "Durable remission",
    ),
    "Decision": (
        "Operable",
        "High risk",
        "Inoperable",
        "Low risk",
        "Medically fit for surgery",
        "Medically inoperable",
        "Borderline resectable",
        "Eligible for clinical trial",
        "Candidate for definitive local therapy",
        "Poor performance status",
        "Good performance status",
        "Resectable",
        "Unresectable",
        "Intermediate risk",
    ),
    "Action": (
        "CT at 6-12 mo",
        "No routine follow-up",
        "Durvalumab",
        "Adjuvant chemotherapy",
        "Concurrent chemoradiation",
        "Surgical resection",
        "Lobectomy preferred",
        "Stereotactic ablative radiotherapy",
        "Systemic treatment per regimen",
        "Cisplatin plus pemetrexed",
        "Observation",
        "Palliative care referral",
        "Maintenance pembrolizumab",
        "Reirradiation when appropriate",
    ),
    "Uncertain": (
        "See NSCL-17",
        "See ST-4",
        "Refer to institutional protocol",
        "As clinically indicated",
        "See principles of surgical therapy",
        "Category 2B",
        "See footnote details",
        "Consult multidisciplinary team",
        "See staging table",
        "Per physician discretion",
        "See NSCL-3",
        "Additional workup as needed",
        "See radiation principles",
        "Guideline continued elsewhere",
    ),
}

# Class-specific qualifier snippets appended by the classification fixture.
QUALIFIER_POOLS = {
    "Evaluation": ("baseline", "staging workup", "diagnostic series",
                   "pretreatment panel"),
    "Result": ("confirmed radiographically", "on restaging",
               "at interval review", "documented"),
    "Decision": ("per tumor board", "after risk assessment",
                 "pending clearance", "by committee consensus"),
    "Action": ("every 3 cycles", "until progression", "for two years",
               "weekly dosing"),
    "Uncertain": ("cross reference", "linked section", "document pointer",
                  "navigation only"),
}

LABEL_POOL = (
    "CLINICAL PRESENTATION",
    "INITIAL EVALUATION",
    "CLINICAL ASSESSMENT",
    "PRETREATMENT EVALUATION",
    "INITIAL THERAPY",
    "ADJUVANT TREATMENT",
    "SURVEILLANCE",
    "FOLLOW-UP THERAPY",
)

FOOTNOTE_POOL = (
    "Based on biopsy results",
    "If clinically indicated",
    "Category 2B recommendation",
    "Per institutional standards",
    "See principles of radiation therapy",
    "Applies to medically fit patients",
    "Repeat imaging as needed",
    "Consider referral to specialist",
)
