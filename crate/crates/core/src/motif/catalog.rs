use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::PqkError;

/// Signaling motif identifier, `M1` through `M14`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MotifId(u8);

impl MotifId {
    pub const TERMINAL: MotifId = MotifId(14);

    pub fn new(number: u8) -> Option<Self> {
        (1..=14).contains(&number).then_some(MotifId(number))
    }

    pub fn number(self) -> u8 {
        self.0
    }

    pub fn is_terminal(self) -> bool {
        self == Self::TERMINAL
    }

    /// Category index in the one-hot layout (M1 -> 0, ..., M14 -> 13).
    pub fn category_index(self) -> usize {
        (self.0 - 1) as usize
    }
}

impl fmt::Display for MotifId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "M{}", self.0)
    }
}

impl FromStr for MotifId {
    type Err = PqkError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        t.strip_prefix('M')
            .or_else(|| t.strip_prefix('m'))
            .and_then(|n| n.parse::<u8>().ok())
            .and_then(MotifId::new)
            .ok_or_else(|| PqkError::UnknownMotif(t.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Motif {
    pub id: MotifId,
    pub sequence: &'static str,
    pub source_protein: &'static str,
    pub binding_partners: &'static [&'static str],
    pub binding_domain: &'static str,
    pub consensus: &'static str,
}

impl Motif {
    pub fn is_terminal(&self) -> bool {
        self.id.is_terminal()
    }
}

macro_rules! motif_row {
    ($n:expr, $seq:expr, $src:expr, [$($bp:expr),*], $dom:expr, $cons:expr) => {
        Motif {
            id: MotifId($n),
            sequence: $seq,
            source_protein: $src,
            binding_partners: &[$($bp),*],
            binding_domain: $dom,
            consensus: $cons,
        }
    };
}

/// Signaling motif library. `M14` is the terminal motif appended to every construct.
pub static CATALOG: [Motif; 14] = [
    motif_row!(1, "DYHNPGYLVLPDSTP", "LAT", ["PLCγ1"], "SH2", "Yx(A/I/L/V)(A/F/I/L/V/W/Y/P)"),
    motif_row!(2, "EELDENYVPMNPNSPP", "Gab1", ["PI3K"], "SH2", "YxxM"),
    motif_row!(3, "EEGAPDYENLQELNHP", "LAT", ["Grb2"], "SH2", "YXNX"),
    motif_row!(4, "LGSNQEEAYVTMSSFYQNQ", "IL7Rα", ["PI3K", "Grb2"], "SH2", "YxxM, YxNx"),
    motif_row!(5, "LPMDEVYESPFADEEIR", "SYK", ["Vav1"], "SH2", "Y(M/L/E)xP"),
    motif_row!(6, "KPMAESITYAAVARHSAG", "LAIR1", ["SHP-1", "SHP-2"], "SH2", "(S/I/V/L)xYxx(I/V/L)"),
    motif_row!(7, "LPTWSTPVQPMALIVLG", "CD4", ["Lck"], "SH3", "PxxPx(R/K)"),
    motif_row!(8, "PAPSIDRSTKPPLDRSL", "SLP76", ["GADS"], "SH3", "RxxK"),
    motif_row!(9, "GSNTAAPVQETLHGCQ", "CD40", ["TRAF2", "TRAF1"], "TRAF-C", "Px(Q/E)E"),
    motif_row!(10, "DDSLPHPQQATDDSGHES", "LMP1", ["TRAF2", "TRAF1"], "TRAF-C", "Px(Q/E)xxD, Px(Q/E)xT"),
    motif_row!(11, "KAPHAKQEPQEINFPDDL", "CD40", ["TRAF6"], "TRAF-C", "PxExxZ"),
    motif_row!(12, "GSGPGSRPTAVEGLALGSS", "IRAK1", ["Pellino protein", "TIFA"], "FHA", "Txx(E/D), Txx(I/L/V)"),
    motif_row!(13, "SAGSAGSAGSAGSAGSAG", "Synthetic", ["Non-functional spacer"], "None", ""),
    motif_row!(14, "", "Terminal", ["Terminal"], "Terminal", ""),
];

pub fn motif(id: MotifId) -> &'static Motif {
    &CATALOG[id.category_index()]
}

/// Annotation axes used to aggregate per-position prediction outcomes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnotationAxis {
    Motif,
    SourceProtein,
    DomainType,
    BindingPartner,
}

impl AnnotationAxis {
    pub const ALL: [AnnotationAxis; 4] = [
        AnnotationAxis::Motif,
        AnnotationAxis::SourceProtein,
        AnnotationAxis::DomainType,
        AnnotationAxis::BindingPartner,
    ];

    pub fn name(self) -> &'static str {
        match self {
            AnnotationAxis::Motif => "motif",
            AnnotationAxis::SourceProtein => "source_protein",
            AnnotationAxis::DomainType => "domain_type",
            AnnotationAxis::BindingPartner => "binding_partner",
        }
    }
}

/// Value of one annotation axis for a motif slot.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Annotation(pub String);

impl Motif {
    pub fn annotation(&self, axis: AnnotationAxis) -> Annotation {
        if self.is_terminal() {
            return Annotation("Terminal".into());
        }
        let value = match axis {
            AnnotationAxis::Motif => self.id.to_string(),
            AnnotationAxis::SourceProtein => self.source_protein.to_string(),
            AnnotationAxis::DomainType => self.binding_domain.to_string(),
            // A motif with several partners contributes one combined value so that
            // every test occurrence lands in exactly one cell per axis.
            AnnotationAxis::BindingPartner => self.binding_partners.join(", "),
        };
        Annotation(value)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ids_are_unique_and_ordered() {
        for (i, m) in CATALOG.iter().enumerate() {
            assert_eq!(m.id.category_index(), i);
        }
        assert!(CATALOG[13].is_terminal());
        assert_eq!(CATALOG.iter().filter(|m| m.is_terminal()).count(), 1);
    }

    #[test]
    fn parse_motif_ids() {
        assert_eq!("M9".parse::<MotifId>().unwrap().number(), 9);
        assert_eq!(" M14 ".parse::<MotifId>().unwrap(), MotifId::TERMINAL);
        assert!(matches!("M15".parse::<MotifId>(), Err(PqkError::UnknownMotif(t)) if t == "M15"));
        assert!("X1".parse::<MotifId>().is_err());
        assert!("M0".parse::<MotifId>().is_err());
    }

    #[test]
    fn annotations() {
        let m4 = motif(MotifId::new(4).unwrap());
        assert_eq!(m4.annotation(AnnotationAxis::BindingPartner).0, "PI3K, Grb2");
        assert_eq!(m4.annotation(AnnotationAxis::SourceProtein).0, "IL7Rα");
        let t = motif(MotifId::TERMINAL);
        assert_eq!(t.annotation(AnnotationAxis::Motif).0, "Terminal");
    }
}
