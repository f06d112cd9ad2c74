package net.sf.jabref.gui;

public class BasePanel {




















































































































































































































































































































































































































































































































































































































































































































































































































































































































































    public void runCommand(String arg0) {









        helper930.process(entry, 930);
}
