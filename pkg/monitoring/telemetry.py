#!/usr/bin/env python3
"""
Simple Telemetry Collector for verification runs
Collects events as structured data instead of raw logs
"""

import json
import logging
import os
import time
from datetime import datetime
from typing import Any, Dict, List, Optional

logger = logging.getLogger("qham")


class TelemetryCollector:
    """Simple telemetry collector that captures events as structured data"""

    def __init__(self):
        self.events: List[Dict[str, Any]] = []
        self.event_stack: List[str] = []  # For hierarchical tracking
        self._by_id: Dict[str, Dict[str, Any]] = {}
        self._sequence = 0
        self.logging_enabled = False
        self.traditional_log_file: Optional[str] = None
        self.directory = "data/telemetry"

    def enable_logging(self, directory: Optional[str] = None):
        """Enable telemetry collection and the file log (call this in debug mode)"""
        if self.logging_enabled:
            return
        self.directory = directory or self.directory
        self._setup_traditional_logging()
        self.logging_enabled = True

    def _setup_traditional_logging(self):
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        os.makedirs(self.directory, exist_ok=True)
        self.traditional_log_file = os.path.join(self.directory, f"telemetry_dump_{timestamp}.log")

        handler = logging.FileHandler(self.traditional_log_file)
        handler.setFormatter(logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s'))
        logger.addHandler(handler)
        logger.setLevel(logging.DEBUG)

    def _create_event(self, event_type: str, data: Dict[str, Any] = None) -> Dict[str, Any]:
        """Create a base event structure; nothing is kept unless logging is enabled"""
        self._sequence += 1
        event = {
            "id": f"{event_type}_{int(time.time() * 1000)}_{self._sequence}",
            "type": event_type,
            "timestamp": datetime.now().isoformat(),
            "data": data or {},
            "children": []
        }
        if not self.logging_enabled:
            return event

        logger.debug("%s %s", event_type, json.dumps(event["data"], default=str))
        self._by_id[event["id"]] = event

        # Add to parent if we're in a hierarchical context
        if self.event_stack and self.event_stack[-1] in self._by_id:
            self._by_id[self.event_stack[-1]]["children"].append(event)
            return event

        self.events.append(event)
        return event

    def _open(self, event_type: str, data: Dict[str, Any]) -> str:
        event = self._create_event(event_type, data)
        self.event_stack.append(event["id"])
        return event["id"]

    def _close(self, event_type: str, data: Dict[str, Any]) -> str:
        if self.event_stack:
            self.event_stack.pop()
        return self._create_event(event_type, data)["id"]

    def run_start(self, command: str, instance: Dict[str, Any]):
        """Track the start of one command on one instance"""
        return self._open("RUN_START", {"command": command, "instance": instance})

    def run_end(self, command: str, verdict: str):
        return self._close("RUN_END", {"command": command, "verdict": verdict})

    def check_start(self, name: str, suite: str):
        """Track a single check (nested under the current run)"""
        return self._open("CHECK_START", {"name": name, "suite": suite})

    def check_end(self, name: str, verdict: str, elapsed_ms: float):
        return self._close("CHECK_END", {"name": name, "verdict": verdict, "elapsed_ms": elapsed_ms})

    def witness(self, name: str, witness: Dict[str, Any]):
        """Track a falsification witness (child of the failing check)"""
        return self._create_event("WITNESS", {"name": name, "witness": witness})["id"]

    def skip(self, name: str, reason: str):
        return self._create_event("SKIP", {"name": name, "reason": reason})["id"]

    def error(self, error_type: str, message: str, details: Dict[str, Any] = None):
        """Track errors"""
        logger.error("%s: %s", error_type, message)
        return self._create_event("ERROR", {
            "error_type": error_type,
            "message": message,
            "details": details or {}
        })["id"]

    def local_function_log(self, source: str, message: str, data: Dict[str, Any] = None):
        """Log events from local code execution (context built, closure finished, ...)"""
        return self._create_event("LOCAL_FUNCTION", {
            "source": source,
            "message": message,
            "data": data or {},
        })["id"]

    def get_events(self) -> List[Dict[str, Any]]:
        """Get all collected events"""
        return self.events

    def to_timestamped_log(self, base_filename: str = "telemetry"):
        """Create timestamped log file with all events dumped as raw data"""
        timestamp = datetime.now().strftime("%Y%m%d_%H%M%S")
        filename = f"{base_filename}_structured_{timestamp}.log"

        with open(filename, 'w') as f:
            f.write(f"COMPLETE TELEMETRY DUMP - {datetime.now().isoformat()}\n")
            f.write("=" * 100 + "\n")
            f.write(f"Total Events: {len(self.events)}\n")
            f.write("=" * 100 + "\n\n")

            f.write("RAW EVENT DATA:\n")
            f.write("-" * 50 + "\n")
            json.dump(self.events, f, indent=2, default=str)
            f.write("\n\n")

            f.write("HUMAN READABLE FORMAT:\n")
            f.write("-" * 50 + "\n")
            self._write_events_to_file(f, self.events, indent=0)
        return filename

    def get_traditional_log_filename(self) -> str:
        """Get the filename of the traditional logging output"""
        return self.traditional_log_file or "No traditional log (logging not enabled)"

    def _write_events_to_file(self, file, events: List[Dict[str, Any]], indent: int):
        """Write events hierarchically to file"""
        for event in events:
            prefix = "  " * indent
            file.write(f"{prefix}[{event['timestamp']}] {event['type']}\n")

            for key, value in event["data"].items():
                file.write(f"{prefix}  {key}: {value}\n")

            if event["children"]:
                file.write(f"{prefix}  └─ Children:\n")
                self._write_events_to_file(file, event["children"], indent + 2)

            file.write("\n")

    def to_json_file(self, filename: str):
        """Save events as JSON for programmatic access"""
        with open(filename, 'w') as f:
            json.dump(self.events, f, indent=2, default=str)


# Global instance for easy access
telemetry = TelemetryCollector()
