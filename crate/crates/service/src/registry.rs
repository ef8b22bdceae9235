//! In-memory dataset registry.
//!
//! A dataset is an immutable, already-sorted transfer history (plus
//! optional snapshot series) parked server-side under a uuid, so a client
//! can pay the load/parse cost once and run many analyses against it.

use microvel_client::wire::DatasetDto;
use microvel_core::{Denomination, StateSeries, TransferRecord};
use std::collections::BTreeMap;
use std::sync::{Arc, RwLock};

#[derive(Debug)]
pub struct StoredDataset {
    pub id: String,
    pub name: Option<String>,
    pub denomination: Denomination,
    pub records: Arc<Vec<TransferRecord>>,
    pub states: Option<Arc<StateSeries>>,
}

impl StoredDataset {
    pub fn describe(&self) -> DatasetDto {
        DatasetDto {
            id: self.id.clone(),
            name: self.name.clone(),
            records: self.records.len(),
            denomination: self.denomination.as_str().to_string(),
            first_block: self.records.first().map(|r| r.block.0),
            last_block: self.records.last().map(|r| r.block.0),
            has_states: self.states.is_some(),
        }
    }
}

#[derive(Clone, Default)]
pub struct AppState {
    datasets: Arc<RwLock<BTreeMap<String, Arc<StoredDataset>>>>,
}

impl AppState {
    pub fn insert(
        &self,
        name: Option<String>,
        denomination: Denomination,
        records: Arc<Vec<TransferRecord>>,
        states: Option<Arc<StateSeries>>,
    ) -> Arc<StoredDataset> {
        let stored = Arc::new(StoredDataset {
            id: uuid::Uuid::new_v4().to_string(),
            name,
            denomination,
            records,
            states,
        });
        self.datasets
            .write()
            .expect("registry lock")
            .insert(stored.id.clone(), stored.clone());
        stored
    }

    pub fn get(&self, id: &str) -> Option<Arc<StoredDataset>> {
        self.datasets.read().expect("registry lock").get(id).cloned()
    }

    pub fn list(&self) -> Vec<DatasetDto> {
        self.datasets
            .read()
            .expect("registry lock")
            .values()
            .map(|d| d.describe())
            .collect()
    }

    pub fn remove(&self, id: &str) -> bool {
        self.datasets
            .write()
            .expect("registry lock")
            .remove(id)
            .is_some()
    }
}
