"""
report_store.py

Persistence of report documents in MongoDB.
The connection is configured through .env (MONGO_URI, or DB_USERNAME/DB_PASSWORD/DB_HOST)
and every write or purge is logged with logfire.
"""

import hashlib
from datetime import datetime, timezone
from pathlib import Path
from typing import List, Mapping, Optional, Union

import logfire
from pymongo.database import Database
from pymongo.mongo_client import MongoClient
from pymongo.server_api import ServerApi

from errors import InputError
from settings import Settings


def get_client(settings: Settings) -> MongoClient:
    uri = settings.resolved_mongo_uri()
    if uri is None:
        raise InputError("report store not configured: set MONGO_URI or DB_USERNAME, DB_PASSWORD and DB_HOST")
    return MongoClient(uri, server_api=ServerApi('1'))


def get_database(settings: Settings, client: Optional[MongoClient] = None) -> Database:
    client = client or get_client(settings)
    return client[settings.db_name]


def ping(client: MongoClient) -> bool:
    """Pre-flight check; False when the deployment cannot be reached."""
    try:
        client.admin.command('ping')
    except Exception as e:
        logfire.error("Report store unreachable", error=str(e))
        return False
    logfire.info("Pinged report store")
    return True


def file_digest(path: Union[str, Path]) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


def store_report(db: Database, document: Mapping, digest: str, collection: str = "Reports") -> str:
    """Insert a copy of the document tagged with the input digest and creation time; returns the new id."""
    record = dict(document)
    record["input_digest"] = digest
    record["created_at"] = datetime.now(timezone.utc)
    result = db[collection].insert_one(record)
    logfire.info("Stored report", collection=collection, digest=digest, report=record.get("report"),
                 id=str(result.inserted_id))
    return str(result.inserted_id)


def find_reports(db: Database, digest: str, collection: str = "Reports") -> List[dict]:
    reports = []
    for doc in db[collection].find({"input_digest": digest}).sort("created_at", 1):
        doc["_id"] = str(doc["_id"])
        reports.append(doc)
    return reports


def purge_reports(db: Database, digest: Optional[str] = None, collection: str = "Reports") -> int:
    """Delete stored reports for one input file, or all of them when digest is None."""
    query = {"input_digest": digest} if digest else {}
    result = db[collection].delete_many(query)
    logfire.info("Purged reports", collection=collection, digest=digest, deleted_count=result.deleted_count)
    return result.deleted_count
