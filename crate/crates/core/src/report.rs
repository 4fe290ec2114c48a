//! Machine-readable verification reports produced by the theorem suites.

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PropertyStatus {
    Pass,
    Fail,
    Skipped,
}

/// One checked property. Failing entries always carry a witness; entries in
/// candidate mode additionally record whether the probed statement held.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PropertyEntry {
    pub id: String,
    pub status: PropertyStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub holds: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl PropertyEntry {
    pub fn pass(id: impl Into<String>) -> Self {
        PropertyEntry {
            id: id.into(),
            status: PropertyStatus::Pass,
            holds: None,
            witness: None,
        }
    }

    pub fn fail(id: impl Into<String>, witness: impl Into<String>) -> Self {
        PropertyEntry {
            id: id.into(),
            status: PropertyStatus::Fail,
            holds: None,
            witness: Some(witness.into()),
        }
    }

    pub fn check(id: impl Into<String>, ok: bool, witness: impl Into<String>) -> Self {
        if ok {
            Self::pass(id)
        } else {
            Self::fail(id, witness)
        }
    }

    pub fn skipped(id: impl Into<String>, note: impl Into<String>) -> Self {
        PropertyEntry {
            id: id.into(),
            status: PropertyStatus::Skipped,
            holds: None,
            witness: Some(note.into()),
        }
    }

    /// Informational probe of a candidate matrix: the entry passes (the probe
    /// ran), `holds` records the observed truth value.
    pub fn observed(id: impl Into<String>, holds: bool) -> Self {
        PropertyEntry {
            id: id.into(),
            status: PropertyStatus::Pass,
            holds: Some(holds),
            witness: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

impl Summary {
    pub fn from_entries(entries: &[PropertyEntry]) -> Self {
        let mut s = Summary::default();
        for e in entries {
            match e.status {
                PropertyStatus::Pass => s.pass += 1,
                PropertyStatus::Fail => s.fail += 1,
                PropertyStatus::Skipped => s.skipped += 1,
            }
        }
        s
    }

    pub fn absorb(&mut self, other: &Summary) {
        self.pass += other.pass;
        self.fail += other.fail;
        self.skipped += other.skipped;
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceDescriptor {
    pub backend: String,
    pub n: usize,
    pub matrix_hash: String,
    pub subspace_hash: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub instance: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct InstanceReport {
    pub descriptor: InstanceDescriptor,
    pub entries: Vec<PropertyEntry>,
    pub summary: Summary,
}

impl InstanceReport {
    pub fn new(descriptor: InstanceDescriptor, entries: Vec<PropertyEntry>) -> Self {
        let summary = Summary::from_entries(&entries);
        InstanceReport {
            descriptor,
            entries,
            summary,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VerificationReport {
    pub suite: String,
    pub backend: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub count: usize,
    pub instances: Vec<InstanceReport>,
    pub summary: Summary,
}

impl VerificationReport {
    pub fn new(
        suite: impl Into<String>,
        backend: impl Into<String>,
        seed: Option<u64>,
        instances: Vec<InstanceReport>,
    ) -> Self {
        let mut summary = Summary::default();
        for i in &instances {
            summary.absorb(&i.summary);
        }
        VerificationReport {
            suite: suite.into(),
            backend: backend.into(),
            seed,
            count: instances.len(),
            instances,
            summary,
        }
    }

    pub fn has_failures(&self) -> bool {
        self.summary.fail > 0
    }
}
