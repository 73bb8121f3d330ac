package media;

import android.media.AudioManager;

public class PlaybackController implements AudioManager.OnAudioFocusChangeListener {
    private AudioManager audio;

    public boolean start() {
        int result = audio.requestAudioFocus(this, AudioManager.STREAM_MUSIC, AudioManager.AUDIOFOCUS_GAIN);
        return result == AudioManager.AUDIOFOCUS_REQUEST_GRANTED;
    }

    @Override
    public void onAudioFocusChange(int change) {
    }
}
