import json
import os
from dataclasses import dataclass, field
from datetime import datetime, timezone
from typing import Dict

VERSION = '1.0.0'


def run_timestamp():
    """ :returns: ISO-8601 UTC time, pinned by SOURCE_DATE_EPOCH when it is set """

    epoch = os.environ.get('SOURCE_DATE_EPOCH')
    moment = datetime.fromtimestamp(int(epoch), timezone.utc) if epoch else datetime.now(timezone.utc)
    return moment.replace(microsecond=0).isoformat()


@dataclass(frozen=True)
class RunManifest:
    """ everything needed to replay a command: feed it back through --config """

    command: str
    config: Dict[str, object]
    seed: int
    inputs: Dict[str, str] = field(default_factory=dict)
    version: str = VERSION
    timestamp: str = field(default_factory=run_timestamp)

    def to_dict(self):
        return {
            'command': self.command,
            'config': dict(sorted(self.config.items())),
            'inputs': dict(sorted(self.inputs.items())),
            'seed': self.seed,
            'version': self.version,
            'timestamp': self.timestamp,
        }

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2) + '\n'

    @classmethod
    def from_dict(cls, data):
        return cls(
            command=data['command'],
            config=dict(data['config']),
            seed=int(data['seed']),
            inputs=dict(data.get('inputs', {})),
            version=data.get('version', VERSION),
            timestamp=data.get('timestamp', ''),
        )
